//! CSV and JSON rendering.
//!
//! Floats use Rust's shortest round-trip formatting. JSON objects come out
//! with sorted keys, so parsing and re-serializing reproduces the bytes.

use serde_json::{json, Map, Value};

use phi_ineq_core::report::{DiscrepancyEntry, LedgerSummary};
use phi_ineq_core::selftest::SelftestOutcome;
use phi_ineq_core::verify::{BoundReport, Summary};

pub const REPORT_HEADER: [&str; 16] = [
    "function",
    "kernel",
    "theorem",
    "a",
    "b",
    "x",
    "lambda",
    "alpha",
    "q",
    "p",
    "s",
    "lhs",
    "rhs",
    "margin",
    "hypothesis_ok",
    "status",
];

pub const LEDGER_HEADER: [&str; 10] = [
    "coefficient",
    "alpha",
    "lambda",
    "s",
    "p",
    "printed",
    "oracle",
    "abs_diff",
    "verdict",
    "note",
];

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn jnum(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

fn jopt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, jnum)
}

fn csv_string(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn report_s(r: &BoundReport) -> Option<f64> {
    r.kernel.s()
}

pub fn reports_csv(reports: &[BoundReport]) -> csv::Result<String> {
    let rows = reports.iter().map(|r| {
        let p = &r.params;
        vec![
            r.function.clone(),
            r.kernel.label().to_string(),
            r.theorem.as_str().to_string(),
            num(p.interval.a),
            num(p.interval.b),
            num(p.x),
            num(p.lambda),
            num(p.alpha),
            num(p.q),
            opt_num(p.p),
            opt_num(report_s(r)),
            num(r.lhs),
            num(r.rhs),
            num(r.margin),
            r.hypothesis_ok.to_string(),
            r.status.as_str().to_string(),
        ]
    });
    csv_string(&REPORT_HEADER, rows)
}

fn summary_json(s: &Summary) -> Value {
    json!({
        "error": s.error,
        "fail": s.fail,
        "hypothesis_unmet": s.hypothesis_unmet,
        "pass": s.pass,
        "total": s.total(),
    })
}

fn report_json(r: &BoundReport) -> Value {
    let p = &r.params;
    let residuals: Map<String, Value> = r.oracle_residuals.iter().map(|(k, v)| (k.clone(), jnum(*v))).collect();
    json!({
        "function": r.function,
        "kernel": r.kernel.label(),
        "theorem": r.theorem.as_str(),
        "a": jnum(p.interval.a),
        "b": jnum(p.interval.b),
        "x": jnum(p.x),
        "lambda": jnum(p.lambda),
        "alpha": jnum(p.alpha),
        "q": jnum(p.q),
        "p": jopt(p.p),
        "s": jopt(report_s(r)),
        "lhs": jnum(r.lhs),
        "rhs": jnum(r.rhs),
        "margin": jnum(r.margin),
        "hypothesis_ok": r.hypothesis_ok,
        "status": r.status.as_str(),
        "oracle_residuals": residuals,
        "message": r.message,
    })
}

pub fn reports_json(command: &str, reports: &[BoundReport]) -> String {
    let v = json!({
        "command": command,
        "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
        "summary": summary_json(&Summary::of(reports)),
    });
    json_string(&v)
}

pub fn ledger_csv(entries: &[DiscrepancyEntry]) -> csv::Result<String> {
    let rows = entries.iter().map(|e| {
        vec![
            e.coefficient.to_string(),
            num(e.alpha),
            num(e.lambda),
            opt_num(e.s),
            opt_num(e.p),
            opt_num(e.printed_value),
            num(e.oracle_value),
            opt_num(e.abs_diff),
            e.verdict.as_str().to_string(),
            e.note.clone().unwrap_or_default(),
        ]
    });
    csv_string(&LEDGER_HEADER, rows)
}

pub fn ledger_json(entries: &[DiscrepancyEntry]) -> String {
    let s = LedgerSummary::of(entries);
    let rows: Vec<Value> = entries
        .iter()
        .map(|e| {
            json!({
                "coefficient": e.coefficient,
                "alpha": jnum(e.alpha),
                "lambda": jnum(e.lambda),
                "s": jopt(e.s),
                "p": jopt(e.p),
                "printed": jopt(e.printed_value),
                "oracle": jnum(e.oracle_value),
                "abs_diff": jopt(e.abs_diff),
                "verdict": e.verdict.as_str(),
                "note": e.note,
            })
        })
        .collect();
    json_string(&json!({
        "command": "coeffs",
        "entries": rows,
        "summary": {
            "agrees": s.agrees,
            "disagrees": s.disagrees,
            "printed_undefined": s.printed_undefined,
        },
    }))
}

pub fn selftest_text(out: &SelftestOutcome) -> String {
    let mut s = String::new();
    for c in &out.checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!("{mark}  {}: {}\n", c.name, c.detail));
    }
    let passed = out.checks.iter().filter(|c| c.passed).count();
    s.push_str(&format!("selftest: {passed}/{} checks passed; {}\n", out.checks.len(), out.note));
    s
}

pub fn selftest_json(out: &SelftestOutcome) -> String {
    let checks: Vec<Value> = out
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
        .collect();
    json_string(&json!({
        "command": "selftest",
        "checks": checks,
        "note": out.note,
        "passed": out.passed(),
    }))
}
