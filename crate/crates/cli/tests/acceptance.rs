//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs under `cargo test` without the libtest harness so
//! the lines are always shown.

use std::f64::consts::{E, PI};
use std::fs;
use std::process::{Command, Output};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use phi_ineq_core::bounds::{coef_a1, coef_a1_oracle, coef_weighted, EvalParams, PrintedCoef, WeightedCoef};
use phi_ineq_core::convexity::PhiKernel;
use phi_ineq_core::fracint::{rl_left, rl_right, Interval};
use phi_ineq_core::function::{registry_function, TestFunction};
use phi_ineq_core::quadrature::QuadratureSpec;
use phi_ineq_core::report::{ledger_entry, Verdict};
use phi_ineq_core::specfun::{gamma, gauss_2f1, incomplete_beta};
use phi_ineq_core::verify::{
    hermite_hadamard_check, lemma1_identity_check, verify_point, Status, Theorem, VerifyOptions,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phi-ineq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn unit_fn(src: &str) -> TestFunction {
    TestFunction::from_expr(src, src, Interval::unit()).unwrap()
}

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn lemma_identity_battery() -> Outcome {
    let start = Instant::now();
    let opts = VerifyOptions::default();
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut count = 0;
    for name in ["square", "cube", "quartic", "exp", "neglog"] {
        let f = registry_function(name).unwrap();
        for _ in 0..20 {
            let x = f.domain.at(rng.gen_range(0.0..=1.0));
            let lambda = rng.gen_range(0.0..=1.0);
            let alpha = rng.gen_range(0.1..4.0);
            let p = EvalParams::new(f.domain, x, lambda, alpha, 1.0).map_err(|e| e.to_string())?;
            let r = lemma1_identity_check(&f, &p, &opts);
            let scaled = (r.lhs - r.rhs).abs() / r.lhs.abs().max(1.0);
            ensure(scaled.is_finite() && scaled <= 1e-8, format!("{name} at {p:?}: residual {scaled:e}"))?;
            worst = worst.max(scaled);
            count += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 10.0, format!("took {secs:.2} s"))?;
    Ok(format!("{count} tuples, worst scaled residual {worst:.1e}, {secs:.2} s"))
}

fn equality_cases() -> Outcome {
    let opts = VerifyOptions::default();
    let mut parts = Vec::new();
    for (src, lambda, want) in [("t^3", 0.0, 0.25), ("t^2", 0.0, 1.0 / 6.0), ("t^2", 1.0, 1.0 / 12.0)] {
        let p = EvalParams::new(Interval::unit(), 0.5, lambda, 1.0, 1.0).unwrap();
        let r = verify_point(&unit_fn(src), &p, &PhiKernel::Constant, Theorem::T1, &opts);
        ensure(r.status == Status::Pass, format!("{src} λ={lambda}: {:?}", r.status))?;
        ensure((r.rhs - r.lhs).abs() <= 1e-9, format!("{src} λ={lambda}: |rhs - lhs| = {:e}", (r.rhs - r.lhs).abs()))?;
        ensure((r.lhs - want).abs() <= 1e-9, format!("{src} λ={lambda}: lhs {} != {want}", r.lhs))?;
        parts.push(format!("{:.1e}", (r.rhs - r.lhs).abs()));
    }
    // Same case through the binary.
    let out = bin(&["verify", "--fn", "t^3", "--x", "0.5", "--lambda", "0", "--alpha", "1", "--q", "1", "--kernel", "constant", "--theorem", "t1"]);
    let text = String::from_utf8_lossy(&out.stdout);
    let row: Vec<&str> = text.lines().nth(1).unwrap_or_default().split(',').collect();
    ensure(out.status.code() == Some(0), "cli verify did not exit 0")?;
    let margin: f64 = row.get(13).and_then(|m| m.parse().ok()).ok_or("no margin column")?;
    ensure(margin.abs() <= 1e-9, format!("cli margin {margin}"))?;
    Ok(format!("|rhs - lhs| = {}", parts.join(", ")))
}

fn coefficient_oracles() -> Outcome {
    let mut worst_a1 = 0.0f64;
    let mut worst_id = 0.0f64;
    let mut points = 0;
    for alpha in [0.5, 1.0, 2.0, 3.5] {
        for lambda in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let oracle_a1 = coef_a1_oracle(alpha, lambda, &quad()).map_err(|e| e.to_string())?;
            worst_a1 = worst_a1.max((coef_a1(alpha, lambda).unwrap() - oracle_a1).abs());
            let a2 = coef_weighted(alpha, lambda, &PhiKernel::Constant, WeightedCoef::A2, &quad()).unwrap();
            let a3 = coef_weighted(alpha, lambda, &PhiKernel::Constant, WeightedCoef::A3, &quad()).unwrap();
            worst_id = worst_id.max((a3 - (oracle_a1 - a2)).abs());
            points += 1;
        }
    }
    // Hand values at α = 1: A1 = 1/3 - λ/2 + λ³/3.
    for lambda in [0.0f64, 0.5, 1.0] {
        let want = 1.0 / 3.0 - lambda / 2.0 + lambda.powi(3) / 3.0;
        ensure((coef_a1(1.0, lambda).unwrap() - want).abs() <= 1e-14, format!("A1(1, {lambda})"))?;
    }
    ensure(points == 20, "grid size")?;
    ensure(worst_a1 <= 1e-10, format!("A1 closed form vs quadrature {worst_a1:e}"))?;
    ensure(worst_id <= 1e-10, format!("A3 = A1 - A2 residual {worst_id:e}"))?;
    Ok(format!("20 points, A1 {worst_a1:.1e}, A3 = A1 - A2 {worst_id:.1e}"))
}

fn ledger_findings() -> Outcome {
    let expected = [
        (PrintedCoef::A3C, 1.0, 1.0, None, 0.25, 1.0 / 12.0),
        (PrintedCoef::A3C, 1.0, 0.0, None, -1.0 / 12.0, 1.0 / 12.0),
        (PrintedCoef::A4, 1.0, 1.0, Some(1.0), 5.0 / 12.0, 1.0 / 12.0),
    ];
    for (coef, alpha, lambda, s, printed, oracle) in expected {
        let e = ledger_entry(coef, alpha, lambda, s, None, &quad());
        let label = format!("{}({alpha}, {lambda})", coef.name());
        ensure(e.verdict == Verdict::Disagrees, format!("{label}: {:?}", e.verdict))?;
        ensure((e.printed_value.unwrap_or(f64::NAN) - printed).abs() <= 1e-10, format!("{label}: printed {:?}", e.printed_value))?;
        ensure((e.oracle_value - oracle).abs() <= 1e-10, format!("{label}: oracle {}", e.oracle_value))?;
    }
    // The coeffs command lists the same findings.
    let out = bin(&["coeffs", "--format", "json"]);
    ensure(out.status.code() == Some(0), "coeffs did not exit 0")?;
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let entries = v["entries"].as_array().ok_or("no entries")?;
    let find = |name: &str, alpha: f64, lambda: f64, s: Option<f64>| {
        entries.iter().find(|e| {
            e["coefficient"] == name
                && e["alpha"].as_f64() == Some(alpha)
                && e["lambda"].as_f64() == Some(lambda)
                && e["s"].as_f64() == s
        })
    };
    for (name, alpha, lambda, s, printed) in [
        ("A3C", 1.0, 1.0, None, 0.25),
        ("A3C", 1.0, 0.0, None, -1.0 / 12.0),
        ("A4", 1.0, 1.0, Some(1.0), 5.0 / 12.0),
    ] {
        let e = find(name, alpha, lambda, s).ok_or(format!("{name}({alpha}, {lambda}) missing from coeffs"))?;
        ensure(e["verdict"] == "DISAGREES", format!("coeffs {name}: {}", e["verdict"]))?;
        ensure((e["printed"].as_f64().unwrap_or(f64::NAN) - printed).abs() <= 1e-10, format!("coeffs {name} printed"))?;
    }
    let b = entries
        .iter()
        .find(|e| e["coefficient"] == "B_closed" && e["alpha"] == 1.0 && e["lambda"] == 1.0 && e["p"] == 2.0)
        .ok_or("B_closed(1, 1, 2) missing")?;
    ensure(b["verdict"] == "PRINTED_UNDEFINED", format!("B_closed(1, 1, 2): {}", b["verdict"]))?;
    // And selftest reproduces them.
    let out = bin(&["selftest"]);
    let text = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.code() == Some(0), format!("selftest exit {:?}:\n{text}", out.status.code()))?;
    let line = text.lines().find(|l| l.contains("discrepancy ledger")).ok_or("no ledger line in selftest")?;
    ensure(line.starts_with("PASS"), line.to_string())?;
    ensure(text.contains("printed A3 at (alpha, lambda) = (1, 1) is 0.250000, oracle 0.083333"), "selftest note")?;
    Ok("A3C(1,1) 0.25 vs 1/12, A3C(1,0) -1/12 vs 1/12, A4(1,1,1) 5/12 vs 1/12".into())
}

fn theorem_sweep() -> Outcome {
    let out = bin(&["sweep"]);
    ensure(matches!(out.status.code(), Some(0)), format!("sweep exit {:?}", out.status.code()))?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let (mut total, mut fail, mut error, mut unmet, mut control_unmet) = (0, 0, 0, 0, 0);
    let mut kernels = std::collections::BTreeSet::new();
    let mut theorems = std::collections::BTreeSet::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        total += 1;
        kernels.insert(rec[1].to_string());
        theorems.insert(rec[2].to_string());
        match &rec[15] {
            "FAIL" => fail += 1,
            "ERROR" => error += 1,
            "HYPOTHESIS_UNMET" => {
                unmet += 1;
                if &rec[0] == "sqrt_control" {
                    control_unmet += 1;
                }
            }
            _ => {}
        }
        if &rec[15] == "PASS" {
            let margin: f64 = rec[13].parse().map_err(|_| "bad margin")?;
            ensure(margin >= -1e-9, format!("PASS row with margin {margin}"))?;
        }
    }
    ensure(total >= 500, format!("only {total} reports"))?;
    ensure(fail == 0 && error == 0, format!("{fail} FAIL, {error} ERROR"))?;
    ensure(control_unmet >= 1, "control function never HYPOTHESIS_UNMET")?;
    ensure(kernels.len() == 3 && theorems.len() == 2, format!("{kernels:?} {theorems:?}"))?;
    Ok(format!("{total} reports, 0 FAIL, {unmet} HYPOTHESIS_UNMET ({control_unmet} from the control)"))
}

fn special_functions() -> Outcome {
    let rel = |got: f64, want: f64| (got - want).abs() / want.abs();
    let g1 = rel(gamma(0.5).unwrap(), PI.sqrt());
    let g2 = rel(gamma(5.0).unwrap(), 24.0);
    let h = (gauss_2f1(1.0, 3.0, 5.0, 1.0).unwrap().value - 4.0).abs();
    let ib = (incomplete_beta(0.5, 2.0, -0.5).unwrap().value - (3.0 * 2f64.sqrt() - 4.0)).abs();
    ensure(g1 <= 1e-12 && g2 <= 1e-12, format!("gamma rel {g1:e} {g2:e}"))?;
    ensure(h <= 1e-10, format!("2F1 {h:e}"))?;
    ensure(ib <= 1e-9, format!("incomplete beta {ib:e}"))?;
    Ok(format!("Γ {g1:.1e}/{g2:.1e}, 2F1 {h:.1e}, B(0.5; 2, -0.5) {ib:.1e}"))
}

/// `Γ(β+1)/Γ(α+β+1) · 1.5^(α+β)` from an arbitrary-precision evaluation.
#[allow(clippy::excessive_precision)]
const POWER_LAW: [(f64, f64, f64); 16] = [
    (0.0, 0.3, 1.2583663623836544072),
    (0.0, 0.5, 1.3819765978853419171),
    (0.0, 1.0, 1.5),
    (0.0, 1.7, 1.2897780252643696067),
    (1.0, 0.3, 1.4519611873657550853),
    (1.0, 0.5, 1.3819765978853419171),
    (1.0, 1.0, 1.125),
    (1.0, 1.7, 0.71654334736909422594),
    (2.0, 0.3, 1.8938624183031588069),
    (2.0, 0.5, 1.6583719174624103005),
    (2.0, 1.0, 1.125),
    (2.0, 1.7, 0.58098109246142775076),
    (3.0, 0.3, 2.5825396613224892821),
    (3.0, 0.5, 2.1321924653088132435),
    (3.0, 1.0, 1.265625),
    (3.0, 1.7, 0.55625849278221805924),
];

fn fractional_integrals() -> Outcome {
    let (a, x) = (0.25, 1.75);
    let mut worst = 0.0f64;
    for (beta, alpha, want) in POWER_LAW {
        let got = rl_left(|t: f64| (t - a).powf(beta), a, alpha, x, &quad()).map_err(|e| e.to_string())?;
        let r = (got - want).abs() / want;
        ensure(r <= 1e-8, format!("β={beta} α={alpha}: {got} vs {want}"))?;
        worst = worst.max(r);
        let got = rl_right(|t: f64| (x - t).powf(beta), x, alpha, a, &quad()).map_err(|e| e.to_string())?;
        let r = (got - want).abs() / want;
        ensure(r <= 1e-8, format!("right β={beta} α={alpha}: {got} vs {want}"))?;
        worst = worst.max(r);
    }
    let (lo, hi) = (0.0, 2.0);
    let f = |t: f64| (t * t).sin() + 1.0 / (1.0 + t);
    let mut mirror = 0.0f64;
    for alpha in [0.3, 0.5, 1.0, 1.7] {
        for y in [0.4, 1.1, 2.0] {
            let l = rl_left(f, lo, alpha, y, &quad()).unwrap();
            let r = rl_right(|t: f64| f(lo + hi - t), hi, alpha, lo + hi - y, &quad()).unwrap();
            mirror = mirror.max((l - r).abs());
        }
    }
    ensure(mirror <= 1e-10, format!("mirror {mirror:e}"))?;
    Ok(format!("power law rel {worst:.1e}, mirror {mirror:.1e}"))
}

fn hermite_hadamard() -> Outcome {
    let opts = VerifyOptions::default();
    for (src, [mid, mean, ends]) in [
        ("t^2", [0.25, 1.0 / 3.0, 0.5]),
        ("exp(t)", [E.sqrt(), E - 1.0, (1.0 + E) / 2.0]),
        ("t", [0.5, 0.5, 0.5]),
    ] {
        let r = hermite_hadamard_check(&unit_fn(src), Interval::unit(), &opts);
        ensure(r.status == Status::Pass, format!("{src}: {:?}", r.status))?;
        let res = &r.oracle_residuals;
        for (key, want) in [("midpoint", mid), ("mean", mean), ("endpoint_average", ends)] {
            ensure((res[key] - want).abs() <= 1e-10, format!("{src} {key}: {} vs {want}", res[key]))?;
        }
        let out = bin(&["verify", "--fn", src, "--theorem", "hh"]);
        ensure(out.status.code() == Some(0), format!("cli hh {src}"))?;
    }
    Ok("t^2, e^t, t: midpoint <= mean <= endpoint average".into())
}

fn determinism_and_exit_codes() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = dir.path().join("plan.json");
    fs::write(
        &cfg,
        r#"{"fn": ["square", "exp", "sqrt_control"], "kernel": ["constant", "mt"],
            "x": [0, 0.3, 1], "lambda": [0, 0.5], "alpha": [0.5, 2], "q": [1, 2]}"#,
    )
    .map_err(|e| e.to_string())?;
    let cfg = cfg.to_str().unwrap();
    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name);
        let out = bin(&["sweep", "--config", cfg, "--out", path.to_str().unwrap()]);
        ensure(out.status.code() == Some(0), format!("config sweep exit {:?}", out.status.code()))?;
        outputs.push(fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(!outputs[0].is_empty() && outputs[0] == outputs[1], "sweep CSV differs between runs")?;
    let json1 = bin(&["sweep", "--config", cfg, "--format", "json"]).stdout;
    let json2 = bin(&["sweep", "--config", cfg, "--format", "json"]).stdout;
    ensure(json1 == json2, "sweep JSON differs between runs")?;
    let reparsed: Value = serde_json::from_slice(&json1).map_err(|e| e.to_string())?;
    ensure(
        format!("{}\n", serde_json::to_string_pretty(&reparsed).unwrap()).as_bytes() == json1.as_slice(),
        "JSON does not round-trip",
    )?;

    let cases: [(&[&str], i32); 5] = [
        (&["verify", "--fn", "t^3", "--x", "0.5", "--lambda", "0", "--alpha", "1", "--q", "1"], 0),
        (&["sweep", "--config", cfg, "--fault-rhs-scale", "0.5"], 1),
        (&["verify", "--fn", "t^3", "--lambda", "1.5"], 2),
        (&["frobnicate"], 2),
        (&["verify", "--fn", "ln(t)", "--x", "0.25", "--alpha", "0.5"], 3),
    ];
    for (args, want) in cases {
        let out = bin(args);
        ensure(out.status.code() == Some(want), format!("{args:?}: exit {:?}, want {want}", out.status.code()))?;
    }
    let out = bin(&["verify", "--fn", "t^3", "--lambda", "1.5"]);
    ensure(String::from_utf8_lossy(&out.stderr).contains("lambda must lie in [0, 1]"), "usage message")?;
    Ok(format!("{} bytes identical across runs; exit codes 0/1/2/3 as specified", outputs[0].len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("lemma identity battery", lemma_identity_battery),
        ("equality cases", equality_cases),
        ("coefficient oracles", coefficient_oracles),
        ("discrepancy ledger findings", ledger_findings),
        ("theorem sweeps", theorem_sweep),
        ("special functions", special_functions),
        ("fractional integrals", fractional_integrals),
        ("Hermite-Hadamard", hermite_hadamard),
        ("determinism and exit codes", determinism_and_exit_codes),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
