//! φ-kernels and a grid-sampling check of φ-convexity.
//!
//! A nonnegative `g` is φ-convex on `[a, b]` when
//!
//! ```text
//! g(t x + (1 - t) y) ≤ t φ(t) g(x) + (1 - t) φ(1 - t) g(y)
//! ```
//!
//! for all `x, y ∈ [a, b]`, `t ∈ (0, 1)`. `φ ≡ 1` is ordinary convexity,
//! `φ(t) = t^(s-1)` is s-convexity in the second sense and
//! `φ(t) = 1/(2√t√(1-t))` is the MT class.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fracint::Interval;

pub const DEFAULT_GRID_N: usize = 33;
pub const DEFAULT_TOL: f64 = 1e-9;

/// Positive samples of a user-supplied weight, interpolated by a monotone
/// (Fritsch–Carlson) cubic and held constant beyond the first/last sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomTable {
    t: Vec<f64>,
    v: Vec<f64>,
    slopes: Vec<f64>,
}

impl CustomTable {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidParams(
                "custom kernel needs at least two samples".into(),
            ));
        }
        for w in samples.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::InvalidParams(
                    "custom kernel abscissae must be strictly increasing".into(),
                ));
            }
        }
        for &(t, v) in &samples {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::InvalidParams(format!(
                    "custom kernel abscissa {t} is not inside (0, 1)"
                )));
            }
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "custom kernel value {v} must be positive"
                )));
            }
        }
        let (t, v): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
        let slopes = pchip_slopes(&t, &v);
        Ok(Self { t, v, slopes })
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.t.iter().copied().zip(self.v.iter().copied())
    }

    pub fn knots(&self) -> &[f64] {
        &self.t
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.t.len();
        if x <= self.t[0] {
            return self.v[0];
        }
        if x >= self.t[n - 1] {
            return self.v[n - 1];
        }
        let i = self.t.partition_point(|&k| k <= x) - 1;
        let h = self.t[i + 1] - self.t[i];
        let s = (x - self.t[i]) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        h00 * self.v[i] + h10 * h * self.slopes[i] + h01 * self.v[i + 1] + h11 * h * self.slopes[i + 1]
    }
}

fn pchip_slopes(t: &[f64], v: &[f64]) -> Vec<f64> {
    let n = t.len();
    let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (v[i + 1] - v[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let mut s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= 0.0 {
            s = 0.0;
        } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
            s = 3.0 * d0;
        }
        s
    };
    d[0] = end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// The weight φ selecting the convexity class.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiKernel {
    Constant,
    PowerS(f64),
    Mt,
    CustomTable(CustomTable),
}

impl PhiKernel {
    /// `φ(t) = t^(s-1)`, requiring `s ∈ (0, 1]`.
    pub fn power(s: f64) -> Result<Self> {
        if s > 0.0 && s <= 1.0 {
            Ok(Self::PowerS(s))
        } else {
            Err(Error::InvalidParams(format!(
                "power kernel needs s in (0, 1], got {s}"
            )))
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Constant => "constant",
            Self::PowerS(_) => "power",
            Self::Mt => "mt",
            Self::CustomTable(_) => "custom",
        }
    }

    pub fn s(&self) -> Option<f64> {
        match self {
            Self::PowerS(s) => Some(*s),
            _ => None,
        }
    }

    /// Algebraic exponents of φ at t → 0 and t → 1. Quadrature callers use them
    /// to straighten the weight near the endpoints.
    pub fn endpoint_exponents(&self) -> (f64, f64) {
        match self {
            Self::Constant | Self::CustomTable(_) => (0.0, 0.0),
            Self::PowerS(s) => (s - 1.0, 0.0),
            Self::Mt => (-0.5, -0.5),
        }
    }

    /// Interior points where φ is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::CustomTable(table) => table.knots().to_vec(),
            _ => Vec::new(),
        }
    }

    /// φ(t) for `t ∈ (0, 1)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Domain(format!("phi is defined on (0, 1), got t = {t}")));
        }
        Ok(self.eval_interior(t))
    }

    /// `t φ(t)`, finite at t = 0 for every kernel.
    pub(crate) fn t_phi(&self, t: f64) -> f64 {
        match self {
            Self::Constant => t,
            Self::PowerS(s) => t.powf(*s),
            Self::Mt => 0.5 * t.sqrt() / (1.0 - t).sqrt(),
            Self::CustomTable(table) => t * table.eval(t),
        }
    }

    /// φ(t) without the domain check, for callers that only sample `(0, 1)`.
    pub(crate) fn eval_interior(&self, t: f64) -> f64 {
        match self {
            Self::Constant => 1.0,
            Self::PowerS(s) => t.powf(s - 1.0),
            Self::Mt => 0.5 / (t.sqrt() * (1.0 - t).sqrt()),
            Self::CustomTable(table) => table.eval(t),
        }
    }
}

/// φ(t) for `t ∈ (0, 1)`.
pub fn phi_eval(kernel: &PhiKernel, t: f64) -> Result<f64> {
    kernel.eval(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessPoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

/// Outcome of [`check_phi_convex`].
///
/// `worst_violation` is the largest `lhs - rhs - tol·max(1, |rhs|)` seen on
/// the grid, so `holds` is exactly `worst_violation ≤ 0`. `witness_point` is
/// where it was attained (lexicographically smallest on ties).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexityWitness {
    pub holds: bool,
    pub worst_violation: f64,
    pub witness_point: WitnessPoint,
    /// Some sampled value of g was negative. Only the MT class rejects this
    /// outright; for the other kernels it is reported, not enforced.
    pub negative_samples: bool,
}

/// Samples the φ-convexity inequality on a `grid_n × grid_n` grid of `(x, y)`
/// pairs over the interval and `grid_n` midpoints `t_k = (k + 1/2)/grid_n`.
pub fn check_phi_convex<G: Fn(f64) -> f64>(
    g: G,
    kernel: &PhiKernel,
    interval: Interval,
    grid_n: usize,
    tol: f64,
) -> Result<ConvexityWitness> {
    if grid_n < 3 {
        return Err(Error::InvalidParams(format!("grid_n must be at least 3, got {grid_n}")));
    }
    if !(tol >= 0.0) {
        return Err(Error::InvalidParams(format!("tolerance must be nonnegative, got {tol}")));
    }
    let xs: Vec<f64> = (0..grid_n)
        .map(|i| interval.at(i as f64 / (grid_n - 1) as f64))
        .collect();
    let gx: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let ts: Vec<f64> = (0..grid_n).map(|k| (k as f64 + 0.5) / grid_n as f64).collect();
    let weights: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| (t * kernel.eval_interior(t), (1.0 - t) * kernel.eval_interior(1.0 - t)))
        .collect();

    let is_mt = matches!(kernel, PhiKernel::Mt);
    let mut negative = false;
    let mut inspect = |v: f64, at: f64| -> Result<()> {
        if !v.is_finite() {
            return Err(Error::Domain(format!("g({at}) is not finite")));
        }
        if v < 0.0 {
            if is_mt {
                return Err(Error::Domain(format!(
                    "MT-convexity needs g ≥ 0, but g({at}) = {v}"
                )));
            }
            negative = true;
        }
        Ok(())
    };
    for (&x, &v) in xs.iter().zip(&gx) {
        inspect(v, x)?;
    }

    let mut worst = f64::NEG_INFINITY;
    let mut witness = WitnessPoint { x: xs[0], y: xs[0], t: ts[0] };
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            for (k, &t) in ts.iter().enumerate() {
                let z = t * x + (1.0 - t) * y;
                let lhs = g(z);
                inspect(lhs, z)?;
                let (wx, wy) = weights[k];
                let rhs = wx * gx[i] + wy * gx[j];
                let excess = lhs - rhs - tol * rhs.abs().max(1.0);
                if excess > worst {
                    worst = excess;
                    witness = WitnessPoint { x, y, t };
                }
            }
        }
    }

    Ok(ConvexityWitness {
        holds: worst <= 0.0,
        worst_violation: worst,
        witness_point: witness,
        negative_samples: negative,
    })
}
