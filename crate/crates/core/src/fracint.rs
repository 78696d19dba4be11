//! Left and right Riemann–Liouville fractional integrals.
//!
//! ```text
//! J_{a+}^α f(x) = 1/Γ(α) ∫_a^x (x - t)^(α-1) f(t) dt,   x > a
//! J_{b-}^α f(x) = 1/Γ(α) ∫_x^b (t - x)^(α-1) f(t) dt,   x < b
//! ```
//!
//! The kernel singularity sits at the evaluation point. Both integrals are
//! rewritten in the distance `s = |x - t|` so the singular end is exactly
//! `s = 0`, which the quadrature removes by substitution when α < 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::specfun::gamma;

/// A finite interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Self { a, b })
        } else {
            Err(Error::InvalidParams(format!(
                "interval needs finite a < b, got [{a}, {b}]"
            )))
        }
    }

    pub fn unit() -> Self {
        Self { a: 0.0, b: 1.0 }
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.a <= other.a && other.b <= self.b
    }

    /// The point at relative position `pos ∈ [0, 1]`; the endpoints are exact.
    pub fn at(&self, pos: f64) -> f64 {
        if pos == 0.0 {
            self.a
        } else if pos == 1.0 {
            self.b
        } else {
            self.a + pos * (self.b - self.a)
        }
    }
}

fn check_order(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "fractional order must be positive, got {alpha}"
        )))
    }
}

/// ∫_0^len s^(α-1) g(s) ds / Γ(α)
fn weighted_from_origin<G: Fn(f64) -> f64>(
    g: G,
    len: f64,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let mut spec = spec.tolerances_only();
    if alpha < 1.0 {
        spec = spec.with_left_exponent(alpha - 1.0);
    }
    let r = if alpha == 1.0 {
        integrate(&g, 0.0, len, &spec)?
    } else {
        integrate(|s: f64| s.powf(alpha - 1.0) * g(s), 0.0, len, &spec)?
    };
    Ok(r.value / gamma(alpha)?)
}

/// Left-sided integral `J_{a+}^α f(x)`.
pub fn rl_left<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    alpha: f64,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_order(alpha)?;
    if !(x > a) || !x.is_finite() || !a.is_finite() {
        return Err(Error::Domain(format!(
            "left fractional integral needs x > a, got a = {a}, x = {x}"
        )));
    }
    weighted_from_origin(|s| f(x - s), x - a, alpha, spec)
}

/// Right-sided integral `J_{b-}^α f(x)`.
pub fn rl_right<F: Fn(f64) -> f64>(
    f: F,
    b: f64,
    alpha: f64,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_order(alpha)?;
    if !(x < b) || !x.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "right fractional integral needs x < b, got b = {b}, x = {x}"
        )));
    }
    weighted_from_origin(|s| f(x + s), b - x, alpha, spec)
}

/// `rl_left` with the order-zero convention `J^0 f = f`.
///
/// The bound formulas always require α > 0 and call [`rl_left`] directly.
pub fn rl_left_or_identity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    alpha: f64,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if alpha == 0.0 {
        Ok(f(x))
    } else {
        rl_left(f, a, alpha, x, spec)
    }
}

/// `rl_right` with the order-zero convention `J^0 f = f`.
pub fn rl_right_or_identity<F: Fn(f64) -> f64>(
    f: F,
    b: f64,
    alpha: f64,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if alpha == 0.0 {
        Ok(f(x))
    } else {
        rl_right(f, b, alpha, x, spec)
    }
}
