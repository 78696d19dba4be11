//! Point checks, identity residuals, Hermite–Hadamard and parameter sweeps.
//!
//! A report is `PASS` only when the hypothesis (φ-convexity of `|f''|^q`,
//! checked by sampling) holds and the margin `rhs - lhs` is at least `-tol`.
//! A point whose hypothesis fails is `HYPOTHESIS_UNMET` and never counts as
//! a violation. A failing margin is recomputed once with ten times tighter
//! quadrature before it is reported as `FAIL`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    coef_a1_oracle, lemma1_rhs, s_f, theorem1_bound_from, theorem2_bound_from, EvalParams,
    Theorem1Coefficients, Theorem2Coefficients,
};
use crate::convexity::{check_phi_convex, PhiKernel, DEFAULT_GRID_N, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::fracint::Interval;
use crate::function::{registry_function, registry_names, TestFunction};
use crate::quadrature::{integrate, QuadratureSpec};

pub const MARGIN_TOL: f64 = 1e-9;
pub const LEMMA1_REL_TOL: f64 = 1e-8;
pub const HH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Theorem {
    T1,
    T2,
    HH,
    #[serde(rename = "LEMMA1")]
    Lemma1,
}

impl Theorem {
    pub fn as_str(&self) -> &'static str {
        match self {
            Theorem::T1 => "T1",
            Theorem::T2 => "T2",
            Theorem::HH => "HH",
            Theorem::Lemma1 => "LEMMA1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    HypothesisUnmet,
    Error,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::HypothesisUnmet => "HYPOTHESIS_UNMET",
            Status::Error => "ERROR",
        }
    }
}

/// Knobs shared by every check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub quad: QuadratureSpec,
    /// Allowed negative margin.
    pub tol: f64,
    pub grid_n: usize,
    pub convexity_tol: f64,
    /// Multiplies every theorem bound. Anything other than 1 corrupts the
    /// bound on purpose and exists to exercise the failure path.
    pub rhs_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            quad: QuadratureSpec::default(),
            tol: MARGIN_TOL,
            grid_n: DEFAULT_GRID_N,
            convexity_tol: DEFAULT_TOL,
            rhs_scale: 1.0,
        }
    }
}

/// One verification record.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub function: String,
    pub params: EvalParams,
    pub kernel: PhiKernel,
    pub theorem: Theorem,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub hypothesis_ok: bool,
    pub oracle_residuals: BTreeMap<String, f64>,
    pub status: Status,
    pub message: Option<String>,
}

impl BoundReport {
    fn error(func: &TestFunction, params: &EvalParams, kernel: &PhiKernel, theorem: Theorem, err: &Error) -> Self {
        Self {
            function: func.name.clone(),
            params: *params,
            kernel: kernel.clone(),
            theorem,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            hypothesis_ok: false,
            oracle_residuals: BTreeMap::new(),
            status: Status::Error,
            message: Some(err.to_string()),
        }
    }
}

/// Samples φ-convexity of `|f''|^q` over the parameter interval.
pub fn hypothesis_holds(
    func: &TestFunction,
    interval: Interval,
    q: f64,
    kernel: &PhiKernel,
    opts: &VerifyOptions,
) -> Result<bool> {
    let g = |t: f64| func.d2(t).abs().powf(q);
    Ok(check_phi_convex(g, kernel, interval, opts.grid_n, opts.convexity_tol)?.holds)
}

enum Coefficients {
    T1(Theorem1Coefficients),
    T2(Theorem2Coefficients),
}

fn theorem_coefficients(
    params: &EvalParams,
    kernel: &PhiKernel,
    theorem: Theorem,
    quad: &QuadratureSpec,
) -> Result<Coefficients> {
    match theorem {
        Theorem::T1 => Ok(Coefficients::T1(Theorem1Coefficients::compute(
            params.alpha,
            params.lambda,
            kernel,
            quad,
        )?)),
        Theorem::T2 => {
            let p = params.p.ok_or_else(|| {
                Error::InvalidParams(format!("the Hölder bound needs q > 1, got q = {}", params.q))
            })?;
            Ok(Coefficients::T2(Theorem2Coefficients::compute(
                params.alpha,
                params.lambda,
                p,
                kernel,
                quad,
            )?))
        }
        other => Err(Error::InvalidParams(format!(
            "{} is not an inequality bound",
            other.as_str()
        ))),
    }
}

struct Evaluation {
    lhs: f64,
    rhs: f64,
    residuals: BTreeMap<String, f64>,
}

fn evaluate_bound(
    func: &TestFunction,
    params: &EvalParams,
    coefs: &Coefficients,
    quad: &QuadratureSpec,
    rhs_scale: f64,
) -> Result<Evaluation> {
    let sf = s_f(func, params, quad)?;
    let identity = lemma1_rhs(func, params, quad)?;
    let rhs = match coefs {
        Coefficients::T1(c) => theorem1_bound_from(func, params, c),
        Coefficients::T2(c) => theorem2_bound_from(func, params, c)?,
    } * rhs_scale;
    let mut residuals = BTreeMap::new();
    residuals.insert("lemma1".to_string(), (sf - identity).abs());
    if let Coefficients::T1(c) = coefs {
        let a1 = coef_a1_oracle(params.alpha, params.lambda, quad)?;
        residuals.insert("A1".to_string(), (c.a1 - a1).abs());
    }
    Ok(Evaluation {
        lhs: sf.abs(),
        rhs,
        residuals,
    })
}

fn finish_report(
    func: &TestFunction,
    params: &EvalParams,
    kernel: &PhiKernel,
    theorem: Theorem,
    hypothesis_ok: bool,
    coefs: Coefficients,
    opts: &VerifyOptions,
) -> BoundReport {
    let run = |coefs: &Coefficients, quad: &QuadratureSpec| evaluate_bound(func, params, coefs, quad, opts.rhs_scale);
    let mut eval = match run(&coefs, &opts.quad) {
        Ok(e) => e,
        Err(err) => return BoundReport::error(func, params, kernel, theorem, &err),
    };
    let passes = |e: &Evaluation| e.rhs - e.lhs >= -opts.tol;
    let mut message = None;
    if hypothesis_ok && !passes(&eval) {
        let tight = opts.quad.tightened(10.0);
        let retry = theorem_coefficients(params, kernel, theorem, &tight).and_then(|c| run(&c, &tight));
        match retry {
            Ok(e) => {
                message = Some("margin re-checked at 10x tighter quadrature".to_string());
                eval = e;
            }
            Err(err) => return BoundReport::error(func, params, kernel, theorem, &err),
        }
    }
    let margin = eval.rhs - eval.lhs;
    let status = if !hypothesis_ok {
        Status::HypothesisUnmet
    } else if margin >= -opts.tol {
        Status::Pass
    } else {
        Status::Fail
    };
    BoundReport {
        function: func.name.clone(),
        params: *params,
        kernel: kernel.clone(),
        theorem,
        lhs: eval.lhs,
        rhs: eval.rhs,
        margin,
        hypothesis_ok,
        oracle_residuals: eval.residuals,
        status,
        message,
    }
}

/// Checks one of the two bounds at one parameter point.
pub fn verify_point(
    func: &TestFunction,
    params: &EvalParams,
    kernel: &PhiKernel,
    theorem: Theorem,
    opts: &VerifyOptions,
) -> BoundReport {
    let prepared = params
        .validate()
        .and_then(|_| func.restricted(params.interval))
        .and_then(|_| hypothesis_holds(func, params.interval, params.q, kernel, opts))
        .and_then(|h| Ok((h, theorem_coefficients(params, kernel, theorem, &opts.quad)?)));
    match prepared {
        Ok((hypothesis_ok, coefs)) => finish_report(func, params, kernel, theorem, hypothesis_ok, coefs, opts),
        Err(err) => BoundReport::error(func, params, kernel, theorem, &err),
    }
}

/// Compares `S_f` with its integral representation. Here `margin` is the
/// absolute residual and the check passes when it is at most
/// `1e-8 · max(1, |S_f|)`.
pub fn lemma1_identity_check(func: &TestFunction, params: &EvalParams, opts: &VerifyOptions) -> BoundReport {
    let kernel = PhiKernel::Constant;
    let computed = s_f(func, params, &opts.quad).and_then(|l| Ok((l, lemma1_rhs(func, params, &opts.quad)?)));
    match computed {
        Ok((lhs, rhs)) => {
            let margin = (lhs - rhs).abs();
            let ok = margin <= LEMMA1_REL_TOL * lhs.abs().max(1.0);
            let mut residuals = BTreeMap::new();
            residuals.insert("lemma1".to_string(), margin);
            BoundReport {
                function: func.name.clone(),
                params: *params,
                kernel,
                theorem: Theorem::Lemma1,
                lhs,
                rhs,
                margin,
                hypothesis_ok: true,
                oracle_residuals: residuals,
                status: if ok { Status::Pass } else { Status::Fail },
                message: None,
            }
        }
        Err(err) => BoundReport::error(func, params, &kernel, Theorem::Lemma1, &err),
    }
}

/// Checks `f((a+b)/2) ≤ (1/(b-a)) ∫ f ≤ (f(a)+f(b))/2`.
///
/// `lhs` is the midpoint value, `rhs` the endpoint average and the integral
/// mean is recorded under `mean` in `oracle_residuals`. The margin is the
/// smaller of the two gaps.
pub fn hermite_hadamard_check(func: &TestFunction, interval: Interval, opts: &VerifyOptions) -> BoundReport {
    let params = EvalParams {
        interval,
        x: interval.midpoint(),
        lambda: 0.0,
        alpha: 1.0,
        q: 1.0,
        p: None,
        s: None,
    };
    let kernel = PhiKernel::Constant;
    let f = |t: f64| func.value(t);
    let hypothesis = func
        .restricted(interval)
        .and_then(|_| Ok(check_phi_convex(f, &kernel, interval, opts.grid_n, opts.convexity_tol)?.holds));
    let hypothesis_ok = match hypothesis {
        Ok(h) => h,
        Err(err) => return BoundReport::error(func, &params, &kernel, Theorem::HH, &err),
    };
    let mean = match integrate(f, interval.a, interval.b, &opts.quad.tolerances_only()) {
        Ok(r) => r.value / interval.len(),
        Err(err) => return BoundReport::error(func, &params, &kernel, Theorem::HH, &err.into()),
    };
    let midpoint = f(interval.midpoint());
    let endpoints = 0.5 * (f(interval.a) + f(interval.b));
    let margin = (mean - midpoint).min(endpoints - mean);
    let mut residuals = BTreeMap::new();
    residuals.insert("midpoint".to_string(), midpoint);
    residuals.insert("mean".to_string(), mean);
    residuals.insert("endpoint_average".to_string(), endpoints);
    let status = if !hypothesis_ok {
        Status::HypothesisUnmet
    } else if margin >= -HH_TOL {
        Status::Pass
    } else {
        Status::Fail
    };
    BoundReport {
        function: func.name.clone(),
        params,
        kernel,
        theorem: Theorem::HH,
        lhs: midpoint,
        rhs: endpoints,
        margin,
        hypothesis_ok,
        oracle_residuals: residuals,
        status,
        message: None,
    }
}

/// A Cartesian sweep over functions, kernels, theorems and parameter grids.
///
/// `x_positions` are relative positions in `[0, 1]` inside each function's
/// own domain, so one grid serves functions on different intervals.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub functions: Vec<TestFunction>,
    pub kernels: Vec<PhiKernel>,
    pub theorems: Vec<Theorem>,
    pub x_positions: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub qs: Vec<f64>,
    pub options: VerifyOptions,
}

impl SweepPlan {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut grid = |name: &str, values: &[f64], ok: &dyn Fn(f64) -> bool, rule: &str| {
            if values.is_empty() {
                out.push(format!("{name} grid is empty"));
            }
            for &v in values {
                if !ok(v) {
                    out.push(format!("{name} = {v} violates {rule}"));
                }
            }
        };
        grid("x", &self.x_positions, &|v| (0.0..=1.0).contains(&v), "0 <= x <= 1 (relative position)");
        grid("lambda", &self.lambdas, &|v| (0.0..=1.0).contains(&v), "lambda in [0, 1]");
        grid("alpha", &self.alphas, &|v| v > 0.0 && v.is_finite(), "alpha > 0");
        grid("q", &self.qs, &|v| v >= 1.0 && v.is_finite(), "q >= 1");
        if self.kernels.is_empty() {
            out.push("kernel list is empty".into());
        }
        if self.theorems.is_empty() {
            out.push("theorem list is empty".into());
        }
        for t in &self.theorems {
            if !matches!(t, Theorem::T1 | Theorem::T2) {
                out.push(format!("sweeps cover T1 and T2 only, got {}", t.as_str()));
            }
        }
        if self.theorems.contains(&Theorem::T2) && !self.theorems.contains(&Theorem::T1) && self.qs.iter().all(|&q| q <= 1.0) {
            out.push("T2 needs at least one q > 1".into());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v.join("; ")))
        }
    }
}

impl SweepPlan {
    /// Every registry function × {constant, power(0.5), mt} × {T1, T2} on a
    /// 5 × 4 × 3 × 3 grid of (x, λ, α, q).
    pub fn default_plan() -> Self {
        Self {
            functions: registry_names().into_iter().filter_map(registry_function).collect(),
            kernels: vec![PhiKernel::Constant, PhiKernel::PowerS(0.5), PhiKernel::Mt],
            theorems: vec![Theorem::T1, Theorem::T2],
            x_positions: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            lambdas: vec![0.0, 1.0 / 3.0, 0.5, 1.0],
            alphas: vec![0.5, 1.0, 2.0],
            qs: vec![1.0, 2.0, 3.0],
            options: VerifyOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub hypothesis_unmet: usize,
    pub error: usize,
}

impl Summary {
    pub fn of(reports: &[BoundReport]) -> Self {
        let mut s = Self::default();
        for r in reports {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::HypothesisUnmet => s.hypothesis_unmet += 1,
                Status::Error => s.error += 1,
            }
        }
        s
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.hypothesis_unmet + self.error
    }
}

/// Ordering by (function, kernel, theorem, x, λ, α, q).
pub fn report_order(a: &BoundReport, b: &BoundReport) -> Ordering {
    a.function
        .cmp(&b.function)
        .then_with(|| a.kernel.label().cmp(b.kernel.label()))
        .then_with(|| a.kernel.s().unwrap_or(0.0).total_cmp(&b.kernel.s().unwrap_or(0.0)))
        .then_with(|| a.theorem.cmp(&b.theorem))
        .then_with(|| a.params.x.total_cmp(&b.params.x))
        .then_with(|| a.params.lambda.total_cmp(&b.params.lambda))
        .then_with(|| a.params.alpha.total_cmp(&b.params.alpha))
        .then_with(|| a.params.q.total_cmp(&b.params.q))
}

struct SweepPoint {
    func: usize,
    kernel: usize,
    theorem: Theorem,
    params: EvalParams,
}

/// Runs every admissible point of the plan. T2 points with `q = 1` have no
/// Hölder exponent and are skipped. Individual failures become `ERROR`
/// reports; only an invalid plan is an error.
pub fn sweep(plan: &SweepPlan) -> Result<Vec<BoundReport>> {
    plan.validate()?;
    let opts = &plan.options;

    let mut points = Vec::new();
    for (fi, func) in plan.functions.iter().enumerate() {
        for ki in 0..plan.kernels.len() {
            for &theorem in &plan.theorems {
                for &pos in &plan.x_positions {
                    for &lambda in &plan.lambdas {
                        for &alpha in &plan.alphas {
                            for &q in &plan.qs {
                                if theorem == Theorem::T2 && q <= 1.0 {
                                    continue;
                                }
                                let params = EvalParams::new(func.domain, func.domain.at(pos), lambda, alpha, q)?;
                                points.push(SweepPoint {
                                    func: fi,
                                    kernel: ki,
                                    theorem,
                                    params,
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    // Hypothesis verdicts depend only on (function, kernel, q).
    let mut hyp_keys: Vec<(usize, usize, u64)> = points.iter().map(|p| (p.func, p.kernel, p.params.q.to_bits())).collect();
    hyp_keys.sort_unstable();
    hyp_keys.dedup();
    let hypotheses: HashMap<(usize, usize, u64), Result<bool>> = hyp_keys
        .par_iter()
        .map(|&(fi, ki, qb)| {
            let func = &plan.functions[fi];
            let verdict = hypothesis_holds(func, func.domain, f64::from_bits(qb), &plan.kernels[ki], opts);
            ((fi, ki, qb), verdict)
        })
        .collect();

    // Coefficients depend only on (kernel, theorem, α, λ, q).
    type CoefKey = (usize, Theorem, u64, u64, u64);
    let coef_key = |p: &SweepPoint| -> CoefKey {
        let q = if p.theorem == Theorem::T1 { 0 } else { p.params.q.to_bits() };
        (p.kernel, p.theorem, p.params.alpha.to_bits(), p.params.lambda.to_bits(), q)
    };
    let mut coef_keys: Vec<CoefKey> = points.iter().map(coef_key).collect();
    coef_keys.sort_unstable();
    coef_keys.dedup();
    let coefficients: HashMap<CoefKey, Result<Coefficients>> = coef_keys
        .par_iter()
        .map(|&key| {
            let (ki, theorem, ab, lb, qb) = key;
            let q = if theorem == Theorem::T1 { 1.0 } else { f64::from_bits(qb) };
            let unit = EvalParams::new(Interval::unit(), 0.5, f64::from_bits(lb), f64::from_bits(ab), q);
            let c = unit.and_then(|p| theorem_coefficients(&p, &plan.kernels[ki], theorem, &opts.quad));
            (key, c)
        })
        .collect();

    let mut reports: Vec<BoundReport> = points
        .par_iter()
        .map(|pt| {
            let func = &plan.functions[pt.func];
            let kernel = &plan.kernels[pt.kernel];
            let hyp = &hypotheses[&(pt.func, pt.kernel, pt.params.q.to_bits())];
            let coefs = &coefficients[&coef_key(pt)];
            match (hyp, coefs) {
                (Ok(h), Ok(c)) => {
                    let c = match c {
                        Coefficients::T1(c) => Coefficients::T1(*c),
                        Coefficients::T2(c) => Coefficients::T2(*c),
                    };
                    finish_report(func, &pt.params, kernel, pt.theorem, *h, c, opts)
                }
                (Err(e), _) | (_, Err(e)) => BoundReport::error(func, &pt.params, kernel, pt.theorem, e),
            }
        })
        .collect();
    reports.sort_by(report_order);
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{midpoint_presets, theorem1_bound};

    fn unit_fn(src: &str) -> TestFunction {
        TestFunction::from_expr(src, src, Interval::unit()).unwrap()
    }

    fn params(x: f64, lambda: f64, alpha: f64, q: f64) -> EvalParams {
        EvalParams::new(Interval::unit(), x, lambda, alpha, q).unwrap()
    }

    #[test]
    fn cube_equality_case_passes_with_zero_margin() {
        let r = verify_point(&unit_fn("t^3"), &params(0.5, 0.0, 1.0, 1.0), &PhiKernel::Constant, Theorem::T1, &VerifyOptions::default());
        assert_eq!(r.status, Status::Pass);
        assert!(r.margin.abs() <= 1e-9, "{}", r.margin);
        assert!((r.lhs - 0.25).abs() < 1e-12);
    }

    #[test]
    fn holder_example_margin() {
        let r = verify_point(&unit_fn("t^2"), &params(0.5, 0.0, 1.0, 2.0), &PhiKernel::Constant, Theorem::T2, &VerifyOptions::default());
        assert_eq!(r.status, Status::Pass);
        let want = 0.2f64.sqrt() * 0.5 - 1.0 / 6.0;
        assert!((r.margin - want).abs() < 1e-12, "{}", r.margin);
    }

    #[test]
    fn concave_second_derivative_is_flagged() {
        let f = registry_function("sqrt_control").unwrap();
        let r = verify_point(&f, &params(0.5, 0.0, 1.0, 1.0), &PhiKernel::Constant, Theorem::T1, &VerifyOptions::default());
        assert_eq!(r.status, Status::HypothesisUnmet);
        assert!(!r.hypothesis_ok);
    }

    #[test]
    fn holder_bound_needs_q_above_one() {
        let r = verify_point(&unit_fn("t^2"), &params(0.5, 0.0, 1.0, 1.0), &PhiKernel::Constant, Theorem::T2, &VerifyOptions::default());
        assert_eq!(r.status, Status::Error);
        assert!(r.message.is_some());
    }

    #[test]
    fn degenerate_x_never_panics() {
        for x in [0.0, 1.0] {
            for th in [Theorem::T1, Theorem::T2] {
                let r = verify_point(&unit_fn("exp(t)"), &params(x, 0.5, 0.7, 2.0), &PhiKernel::Mt, th, &VerifyOptions::default());
                assert_eq!(r.status, Status::Pass, "{r:?}");
            }
        }
    }

    #[test]
    fn corrupted_bound_fails() {
        let opts = VerifyOptions {
            rhs_scale: 0.5,
            ..VerifyOptions::default()
        };
        let r = verify_point(&unit_fn("t^3"), &params(0.5, 0.0, 1.0, 1.0), &PhiKernel::Constant, Theorem::T1, &opts);
        assert_eq!(r.status, Status::Fail);
        assert!(r.message.as_deref().unwrap().contains("tighter"));
    }

    #[test]
    fn lemma_identity_examples() {
        let opts = VerifyOptions::default();
        let r = lemma1_identity_check(&unit_fn("t^3"), &params(0.5, 0.0, 1.0, 1.0), &opts);
        assert_eq!(r.status, Status::Pass);
        assert!((r.lhs + 0.25).abs() < 1e-12 && (r.rhs + 0.25).abs() < 1e-12);
        let r = lemma1_identity_check(&unit_fn("2*t - 3"), &params(0.2, 0.9, 2.2, 1.0), &opts);
        assert_eq!(r.status, Status::Pass);
        assert!(r.lhs.abs() < 1e-12 && r.rhs == 0.0);
        let r = lemma1_identity_check(&unit_fn("exp(t)"), &params(0.3, 0.7, 2.5, 1.0), &opts);
        assert_eq!(r.status, Status::Pass);
    }

    #[test]
    fn hermite_hadamard_examples() {
        let opts = VerifyOptions::default();
        let r = hermite_hadamard_check(&unit_fn("t^2"), Interval::unit(), &opts);
        assert_eq!(r.status, Status::Pass);
        assert!((r.lhs - 0.25).abs() < 1e-15 && (r.rhs - 0.5).abs() < 1e-15);
        assert!((r.oracle_residuals["mean"] - 1.0 / 3.0).abs() < 1e-14);
        let r = hermite_hadamard_check(&unit_fn("t"), Interval::unit(), &opts);
        assert_eq!(r.status, Status::Pass);
        assert!(r.margin.abs() < 1e-15);
        let r = hermite_hadamard_check(&unit_fn("-t^2"), Interval::unit(), &opts);
        assert_eq!(r.status, Status::HypothesisUnmet);
    }

    #[test]
    fn sweep_rejects_invalid_plan_and_handles_empty() {
        let mut plan = SweepPlan {
            functions: vec![],
            kernels: vec![PhiKernel::Constant],
            theorems: vec![Theorem::T1],
            x_positions: vec![0.5],
            lambdas: vec![0.0],
            alphas: vec![1.0],
            qs: vec![1.0],
            options: VerifyOptions::default(),
        };
        assert!(sweep(&plan).unwrap().is_empty());
        plan.lambdas = vec![1.5];
        assert!(sweep(&plan).is_err());
        plan.lambdas = vec![0.0];
        plan.theorems = vec![Theorem::HH];
        assert!(sweep(&plan).is_err());
    }

    #[test]
    fn small_sweep_example() {
        let names = ["square", "cube", "exp"];
        let plan = SweepPlan {
            functions: names.iter().map(|n| registry_function(n).unwrap()).collect(),
            kernels: vec![PhiKernel::Constant],
            theorems: vec![Theorem::T1],
            x_positions: vec![0.25, 0.5, 0.75],
            lambdas: vec![0.0, 1.0 / 3.0, 1.0],
            alphas: vec![0.5, 1.0, 2.0],
            qs: vec![1.0, 2.0],
            options: VerifyOptions::default(),
        };
        let reports = sweep(&plan).unwrap();
        assert_eq!(reports.len(), 162);
        let summary = Summary::of(&reports);
        assert_eq!(summary.fail, 0);
        assert_eq!(summary.error, 0);
        assert!(reports.windows(2).all(|w| report_order(&w[0], &w[1]) != Ordering::Greater));
    }

    #[test]
    fn midpoint_presets_match_direct_bound() {
        let f = registry_function("quartic").unwrap();
        let opts = VerifyOptions::default();
        for (lambda, x) in midpoint_presets(f.domain) {
            let p = EvalParams::new(f.domain, x, lambda, 1.5, 1.0).unwrap();
            let r = verify_point(&f, &p, &PhiKernel::Constant, Theorem::T1, &opts);
            let direct = theorem1_bound(&f, &p, &PhiKernel::Constant, &opts.quad).unwrap();
            assert_eq!(r.status, Status::Pass);
            assert!((r.rhs - direct).abs() <= 1e-12, "{} vs {direct}", r.rhs);
        }
    }
}
