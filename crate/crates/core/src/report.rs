//! Printed closed forms against their quadrature oracles.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{printed_coefficient, EvalParams, PrintedCoef};
use crate::error::Result;
use crate::fracint::Interval;
use crate::quadrature::QuadratureSpec;

pub const AGREE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Agrees,
    Disagrees,
    PrintedUndefined,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Agrees => "AGREES",
            Verdict::Disagrees => "DISAGREES",
            Verdict::PrintedUndefined => "PRINTED_UNDEFINED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyEntry {
    pub coefficient: &'static str,
    pub alpha: f64,
    pub lambda: f64,
    pub s: Option<f64>,
    pub p: Option<f64>,
    /// `None` when the closed form cannot be evaluated at this point.
    pub printed_value: Option<f64>,
    pub oracle_value: f64,
    pub abs_diff: Option<f64>,
    pub verdict: Verdict,
    /// Why the printed value is undefined, or why the oracle failed.
    pub note: Option<String>,
}

/// Parameter lists for the ledger. `(α, λ)` coefficients use the first two
/// lists, `s` coefficients add `ss` and Beta-type coefficients add `ps`.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerGrid {
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub ss: Vec<f64>,
    pub ps: Vec<f64>,
}

impl Default for LedgerGrid {
    fn default() -> Self {
        Self {
            alphas: vec![0.5, 1.0, 2.0],
            lambdas: vec![0.0, 0.5, 1.0],
            ss: vec![0.5, 1.0],
            ps: vec![2.0, 3.0],
        }
    }
}

fn ledger_params(alpha: f64, lambda: f64, s: Option<f64>, p: Option<f64>) -> Result<EvalParams> {
    // q is the conjugate of p, so that p comes out exactly as requested.
    let q = p.map_or(1.0, |p| p / (p - 1.0));
    let mut params = EvalParams::new(Interval::unit(), 0.5, lambda, alpha, q)?;
    if let Some(p) = p {
        params.p = Some(p);
    }
    if let Some(s) = s {
        params = params.with_s(s)?;
    }
    Ok(params)
}

/// Compares one closed form with its oracle at one point.
pub fn ledger_entry(
    coef: PrintedCoef,
    alpha: f64,
    lambda: f64,
    s: Option<f64>,
    p: Option<f64>,
    quad: &QuadratureSpec,
) -> DiscrepancyEntry {
    let mut entry = DiscrepancyEntry {
        coefficient: coef.name(),
        alpha,
        lambda,
        s,
        p,
        printed_value: None,
        oracle_value: f64::NAN,
        abs_diff: None,
        verdict: Verdict::Disagrees,
        note: None,
    };
    let params = match ledger_params(alpha, lambda, s, p) {
        Ok(params) => params,
        Err(err) => {
            entry.verdict = Verdict::PrintedUndefined;
            entry.note = Some(err.to_string());
            return entry;
        }
    };
    match coef.oracle(&params, quad) {
        Ok(v) => entry.oracle_value = v,
        Err(err) => entry.note = Some(format!("oracle failed: {err}")),
    }
    match printed_coefficient(coef, &params) {
        Ok(r) if r.value.is_finite() => {
            entry.printed_value = Some(r.value);
            let diff = (r.value - entry.oracle_value).abs();
            if diff.is_finite() {
                entry.abs_diff = Some(diff);
                if diff <= AGREE_TOL {
                    entry.verdict = Verdict::Agrees;
                }
            }
        }
        Ok(r) => {
            entry.verdict = Verdict::PrintedUndefined;
            entry.note = Some(format!("closed form evaluates to {}", r.value));
        }
        Err(err) => {
            entry.verdict = Verdict::PrintedUndefined;
            entry.note = Some(err.to_string());
        }
    }
    entry
}

fn entry_order(a: &DiscrepancyEntry, b: &DiscrepancyEntry) -> Ordering {
    let rank = |name: &str| PrintedCoef::ALL.iter().position(|c| c.name() == name);
    let opt = |x: Option<f64>| x.unwrap_or(f64::NEG_INFINITY);
    rank(a.coefficient)
        .cmp(&rank(b.coefficient))
        .then_with(|| a.alpha.total_cmp(&b.alpha))
        .then_with(|| a.lambda.total_cmp(&b.lambda))
        .then_with(|| opt(a.s).total_cmp(&opt(b.s)))
        .then_with(|| opt(a.p).total_cmp(&opt(b.p)))
}

/// One entry per (closed form, admissible grid point), sorted.
pub fn build_ledger(grid: &LedgerGrid, quad: &QuadratureSpec) -> Vec<DiscrepancyEntry> {
    let mut points = Vec::new();
    for coef in PrintedCoef::ALL {
        let ss: Vec<Option<f64>> = if coef.needs_s() {
            grid.ss.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        let ps: Vec<Option<f64>> = if coef.needs_p() {
            grid.ps.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for &alpha in &grid.alphas {
            for &lambda in &grid.lambdas {
                for &s in &ss {
                    for &p in &ps {
                        points.push((coef, alpha, lambda, s, p));
                    }
                }
            }
        }
    }
    let mut entries: Vec<DiscrepancyEntry> = points
        .par_iter()
        .map(|&(coef, alpha, lambda, s, p)| ledger_entry(coef, alpha, lambda, s, p, quad))
        .collect();
    entries.sort_by(entry_order);
    entries
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LedgerSummary {
    pub agrees: usize,
    pub disagrees: usize,
    pub printed_undefined: usize,
}

impl LedgerSummary {
    pub fn of(entries: &[DiscrepancyEntry]) -> Self {
        let mut s = Self::default();
        for e in entries {
            match e.verdict {
                Verdict::Agrees => s.agrees += 1,
                Verdict::Disagrees => s.disagrees += 1,
                Verdict::PrintedUndefined => s.printed_undefined += 1,
            }
        }
        s
    }
}
