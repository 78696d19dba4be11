//! The functional `S_f`, its integral representation, the coefficient
//! integrals and the two upper bounds on `|S_f|`.
//!
//! With `L = b - a`, `l = x - a`, `r = b - x`:
//!
//! ```text
//! S_f = (1-λ) (r^(α+1) - l^(α+1))/L · f'(x)
//!     + (1+α-λ) (l^α + r^α)/L · f(x)
//!     + λ (l^α f(a) + r^α f(b))/L
//!     - Γ(α+2)/L · { J_{x-}^α f(a) + J_{x+}^α f(b) }
//! ```
//!
//! where `J_{x-}^α f(a) = 1/Γ(α) ∫_a^x (t-a)^(α-1) f(t) dt` and
//! `J_{x+}^α f(b) = 1/Γ(α) ∫_x^b (b-t)^(α-1) f(t) dt`. The same quantity
//! equals
//!
//! ```text
//! l^(α+2)/L ∫_0^1 t(λ - t^α) f''(tx + (1-t)a) dt
//!   + r^(α+2)/L ∫_0^1 t(λ - t^α) f''(tx + (1-t)b) dt.
//! ```
//!
//! The weight `t(λ - t^α)` changes sign at `t = λ^(1/α)`; every coefficient
//! integral is split there.
//!
//! Bounds are always assembled from quadrature values of the coefficients.
//! The closed forms in [`printed_coefficient`] are kept only so they can be
//! compared against those oracles.

use std::collections::BTreeMap;

use crate::convexity::PhiKernel;
use crate::error::{Error, Result};
use crate::fracint::{rl_left, rl_right, Interval};
use crate::function::TestFunction;
use crate::quadrature::{integrate, QuadratureSpec};
use crate::specfun::{beta_fn, gamma, gauss_2f1, incomplete_beta, Method, SpecFunResult};

/// Tolerance on `1/p + 1/q = 1`.
const CONJUGACY_TOL: f64 = 1e-12;

/// A parameter point `(a, b, x, λ, α, q)` with the derived Hölder exponent
/// `p = q/(q-1)` and an optional s-convexity index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalParams {
    pub interval: Interval,
    pub x: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub q: f64,
    pub p: Option<f64>,
    pub s: Option<f64>,
}

/// Hölder conjugate of `q`, or `None` for `q = 1`.
pub fn conjugate_exponent(q: f64) -> Option<f64> {
    (q > 1.0).then(|| q / (q - 1.0))
}

impl EvalParams {
    pub fn new(interval: Interval, x: f64, lambda: f64, alpha: f64, q: f64) -> Result<Self> {
        let params = Self {
            interval,
            x,
            lambda,
            alpha,
            q,
            p: conjugate_exponent(q),
            s: None,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_s(mut self, s: f64) -> Result<Self> {
        self.s = Some(s);
        self.validate()?;
        Ok(self)
    }

    /// Every violated constraint, in a fixed order.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let Interval { a, b } = self.interval;
        if !(a.is_finite() && b.is_finite() && a < b) {
            out.push(format!("interval must satisfy a < b (finite), got [{a}, {b}]"));
        } else if !(a <= self.x && self.x <= b) {
            out.push(format!("x must lie in [a, b] = [{a}, {b}], got {}", self.x));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            out.push(format!("lambda must lie in [0, 1], got {}", self.lambda));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            out.push(format!("alpha must be > 0, got {}", self.alpha));
        }
        if !(self.q >= 1.0 && self.q.is_finite()) {
            out.push(format!("q must be >= 1, got {}", self.q));
        }
        if let Some(p) = self.p {
            if !(p > 1.0) {
                out.push(format!("p must be > 1, got {p}"));
            } else if self.q > 1.0 && (1.0 / p + 1.0 / self.q - 1.0).abs() > CONJUGACY_TOL {
                out.push(format!("p = {p} and q = {} are not conjugate", self.q));
            }
        }
        if let Some(s) = self.s {
            if !(s > 0.0 && s <= 1.0) {
                out.push(format!("s must lie in (0, 1], got {s}"));
            }
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

    fn require_p(&self) -> Result<f64> {
        self.p.ok_or_else(|| {
            Error::InvalidParams(format!("a Hölder exponent needs q > 1, got q = {}", self.q))
        })
    }

    fn require_s(&self) -> Result<f64> {
        self.s
            .ok_or_else(|| Error::InvalidParams("this quantity needs the index s".into()))
    }

    /// `(x - a)^e` and `(b - x)^e`, exactly zero at the matching endpoint.
    fn side_powers(&self, e: f64) -> (f64, f64) {
        let pow = |d: f64| if d == 0.0 { 0.0 } else { d.powf(e) };
        (pow(self.x - self.interval.a), pow(self.interval.b - self.x))
    }
}

/// Sign-change point `λ^(1/α)` of `t(λ - t^α)` on `[0, 1]`.
pub fn kink(alpha: f64, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        0.0
    } else if lambda >= 1.0 {
        1.0
    } else {
        lambda.powf(1.0 / alpha)
    }
}

#[inline]
fn lemma_weight(t: f64, lambda: f64, alpha: f64) -> f64 {
    t * (lambda - t.powf(alpha))
}

fn check_alpha_lambda(alpha: f64, lambda: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParams(format!("alpha must be > 0, got {alpha}")));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParams(format!("lambda must lie in [0, 1], got {lambda}")));
    }
    Ok(())
}

/// Splits strictly inside (0, 1), sorted and deduplicated.
fn unit_splits(points: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = points.into_iter().filter(|&p| p > 0.0 && p < 1.0).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// `S_f(x, λ, α; a, b)`.
pub fn s_f(func: &TestFunction, params: &EvalParams, quad: &QuadratureSpec) -> Result<f64> {
    params.validate()?;
    let Interval { a, b } = params.interval;
    let (x, lambda, alpha) = (params.x, params.lambda, params.alpha);
    let len = b - a;
    let f = |t: f64| func.value(t);

    let (l1, r1) = params.side_powers(alpha + 1.0);
    let (l0, r0) = params.side_powers(alpha);

    let derivative_term = (1.0 - lambda) * (r1 - l1) / len * func.d1(x);
    let centre_term = (1.0 + alpha - lambda) * (l0 + r0) / len * f(x);
    let endpoint_term = lambda * (l0 * f(a) + r0 * f(b)) / len;

    // J_{x-}^α f(a) is the right-sided integral on [a, x] evaluated at a;
    // J_{x+}^α f(b) is the left-sided integral on [x, b] evaluated at b.
    let left_fractional = if x > a { rl_right(f, x, alpha, a, quad)? } else { 0.0 };
    let right_fractional = if x < b { rl_left(f, x, alpha, b, quad)? } else { 0.0 };
    let fractional_term = gamma(alpha + 2.0)? / len * (left_fractional + right_fractional);

    Ok(derivative_term + centre_term + endpoint_term - fractional_term)
}

/// The two-integral representation of `S_f` through `f''`.
pub fn lemma1_rhs(func: &TestFunction, params: &EvalParams, quad: &QuadratureSpec) -> Result<f64> {
    params.validate()?;
    let Interval { a, b } = params.interval;
    let (x, lambda, alpha) = (params.x, params.lambda, params.alpha);
    let len = b - a;
    let (wl, wr) = params.side_powers(alpha + 2.0);
    let spec = quad
        .tolerances_only()
        .with_split_points(unit_splits([kink(alpha, lambda)]));

    let side = |end: f64| -> Result<f64> {
        let r = integrate(
            |t| lemma_weight(t, lambda, alpha) * func.d2(t * x + (1.0 - t) * end),
            0.0,
            1.0,
            &spec,
        )?;
        Ok(r.value)
    };
    let left = if wl > 0.0 { wl / len * side(a)? } else { 0.0 };
    let right = if wr > 0.0 { wr / len * side(b)? } else { 0.0 };
    Ok(left + right)
}

/// `A₁(α, λ) = ∫₀¹ |t(λ - t^α)| dt` in closed form.
pub fn coef_a1(alpha: f64, lambda: f64) -> Result<f64> {
    check_alpha_lambda(alpha, lambda)?;
    let pow = if lambda == 0.0 { 0.0 } else { lambda.powf(1.0 + 2.0 / alpha) };
    Ok((alpha * pow + 1.0) / (alpha + 2.0) - lambda / 2.0)
}

/// `A₁` by quadrature.
pub fn coef_a1_oracle(alpha: f64, lambda: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_alpha_lambda(alpha, lambda)?;
    let spec = quad
        .tolerances_only()
        .with_split_points(unit_splits([kink(alpha, lambda)]));
    Ok(integrate(|t| lemma_weight(t, lambda, alpha).abs(), 0.0, 1.0, &spec)?.value)
}

/// Which φ-weighted coefficient to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WeightedCoef {
    /// `∫₀¹ |t(λ - t^α)| t φ(t) dt`
    A2,
    /// `∫₀¹ |t(λ - t^α)| (1-t) φ(1-t) dt`
    A3,
}

/// `A₂` or `A₃` for the given kernel, by quadrature.
pub fn coef_weighted(
    alpha: f64,
    lambda: f64,
    kernel: &PhiKernel,
    which: WeightedCoef,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_alpha_lambda(alpha, lambda)?;
    let k = kink(alpha, lambda);
    let (left, right) = kernel.endpoint_exponents();
    let knots = kernel.breakpoints();
    let r = match which {
        WeightedCoef::A2 => {
            let spec = quad
                .tolerances_only()
                .with_split_points(unit_splits(knots.into_iter().chain([k])))
                .with_left_exponent(left)
                .with_right_exponent(right);
            integrate(
                |t| lemma_weight(t, lambda, alpha).abs() * kernel.t_phi(t),
                0.0,
                1.0,
                &spec,
            )?
        }
        WeightedCoef::A3 => {
            let spec = quad
                .tolerances_only()
                .with_split_points(unit_splits(knots.into_iter().map(|p| 1.0 - p).chain([k])))
                .with_left_exponent(right)
                .with_right_exponent(left);
            integrate(
                |t| lemma_weight(t, lambda, alpha).abs() * kernel.t_phi(1.0 - t),
                0.0,
                1.0,
                &spec,
            )?
        }
    };
    Ok(r.value)
}

/// `∫₀¹ t φ(t) dt` by quadrature.
pub fn weight_mean(kernel: &PhiKernel, quad: &QuadratureSpec) -> Result<f64> {
    let (left, right) = kernel.endpoint_exponents();
    let spec = quad
        .tolerances_only()
        .with_split_points(unit_splits(kernel.breakpoints()))
        .with_left_exponent(left)
        .with_right_exponent(right);
    Ok(integrate(|t| kernel.t_phi(t), 0.0, 1.0, &spec)?.value)
}

fn check_p(p: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("p must be > 1, got {p}")))
    }
}

/// `C₁ = ∫₀^k (t(λ - t^α))^p dt` with `k = λ^(1/α)`.
pub fn coef_c1(alpha: f64, lambda: f64, p: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_alpha_lambda(alpha, lambda)?;
    check_p(p)?;
    let k = kink(alpha, lambda);
    if k == 0.0 {
        return Ok(0.0);
    }
    let r = integrate(
        |t| lemma_weight(t, lambda, alpha).max(0.0).powf(p),
        0.0,
        k,
        &quad.tolerances_only(),
    )?;
    Ok(r.value)
}

/// `C₂ = ∫_k^1 (t(t^α - λ))^p dt` with `k = λ^(1/α)`.
pub fn coef_c2(alpha: f64, lambda: f64, p: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_alpha_lambda(alpha, lambda)?;
    check_p(p)?;
    let k = kink(alpha, lambda);
    if k == 1.0 {
        return Ok(0.0);
    }
    let r = integrate(
        |t| (-lemma_weight(t, lambda, alpha)).max(0.0).powf(p),
        k,
        1.0,
        &quad.tolerances_only(),
    )?;
    Ok(r.value)
}

/// `B(α, λ, p) = ∫₀¹ |t(λ - t^α)|^p dt = C₁ + C₂`.
pub fn coef_b(alpha: f64, lambda: f64, p: f64, quad: &QuadratureSpec) -> Result<f64> {
    Ok(coef_c1(alpha, lambda, p, quad)? + coef_c2(alpha, lambda, p, quad)?)
}

/// Coefficients of the power-mean bound at one `(α, λ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Coefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl Theorem1Coefficients {
    pub fn compute(alpha: f64, lambda: f64, kernel: &PhiKernel, quad: &QuadratureSpec) -> Result<Self> {
        Ok(Self {
            a1: coef_a1(alpha, lambda)?,
            a2: coef_weighted(alpha, lambda, kernel, WeightedCoef::A2, quad)?,
            a3: coef_weighted(alpha, lambda, kernel, WeightedCoef::A3, quad)?,
        })
    }
}

/// Coefficients of the Hölder bound at one `(α, λ, p, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem2Coefficients {
    pub b: f64,
    /// `∫₀¹ t φ(t) dt`
    pub weight_mean: f64,
}

impl Theorem2Coefficients {
    pub fn compute(alpha: f64, lambda: f64, p: f64, kernel: &PhiKernel, quad: &QuadratureSpec) -> Result<Self> {
        Ok(Self {
            b: coef_b(alpha, lambda, p, quad)?,
            weight_mean: weight_mean(kernel, quad)?,
        })
    }
}

struct SecondDerivativeSamples {
    at_x: f64,
    at_a: f64,
    at_b: f64,
}

fn sample_second_derivative(func: &TestFunction, params: &EvalParams) -> SecondDerivativeSamples {
    let q = params.q;
    let g = |t: f64| func.d2(t).abs().powf(q);
    SecondDerivativeSamples {
        at_x: g(params.x),
        at_a: g(params.interval.a),
        at_b: g(params.interval.b),
    }
}

/// Power-mean bound assembled from precomputed coefficients.
pub fn theorem1_bound_from(func: &TestFunction, params: &EvalParams, c: &Theorem1Coefficients) -> f64 {
    let q = params.q;
    let len = params.interval.len();
    let (wl, wr) = params.side_powers(params.alpha + 2.0);
    let g = sample_second_derivative(func, params);
    let front = if q == 1.0 { 1.0 } else { c.a1.powf(1.0 - 1.0 / q) };
    let left = if wl > 0.0 {
        wl / len * (c.a2 * g.at_x + c.a3 * g.at_a).powf(1.0 / q)
    } else {
        0.0
    };
    let right = if wr > 0.0 {
        wr / len * (c.a2 * g.at_x + c.a3 * g.at_b).powf(1.0 / q)
    } else {
        0.0
    };
    front * (left + right)
}

/// Upper bound on `|S_f|` when `|f''|^q` is φ-convex, `q ≥ 1`.
pub fn theorem1_bound(
    func: &TestFunction,
    params: &EvalParams,
    kernel: &PhiKernel,
    quad: &QuadratureSpec,
) -> Result<f64> {
    params.validate()?;
    let c = Theorem1Coefficients::compute(params.alpha, params.lambda, kernel, quad)?;
    Ok(theorem1_bound_from(func, params, &c))
}

/// Hölder bound assembled from precomputed coefficients.
pub fn theorem2_bound_from(
    func: &TestFunction,
    params: &EvalParams,
    c: &Theorem2Coefficients,
) -> Result<f64> {
    let p = params.require_p()?;
    let q = params.q;
    let len = params.interval.len();
    let (wl, wr) = params.side_powers(params.alpha + 2.0);
    let g = sample_second_derivative(func, params);
    let left = if wl > 0.0 {
        wl / len * ((g.at_x + g.at_a) * c.weight_mean).powf(1.0 / q)
    } else {
        0.0
    };
    let right = if wr > 0.0 {
        wr / len * ((g.at_x + g.at_b) * c.weight_mean).powf(1.0 / q)
    } else {
        0.0
    };
    Ok(c.b.powf(1.0 / p) * (left + right))
}

/// Upper bound on `|S_f|` when `|f''|^q` is φ-convex, `q > 1`, `1/p + 1/q = 1`.
pub fn theorem2_bound(
    func: &TestFunction,
    params: &EvalParams,
    kernel: &PhiKernel,
    quad: &QuadratureSpec,
) -> Result<f64> {
    params.validate()?;
    let p = params.require_p()?;
    let c = Theorem2Coefficients::compute(params.alpha, params.lambda, p, kernel, quad)?;
    theorem2_bound_from(func, params, &c)
}

/// Named specializations of the two bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Specialization {
    /// Power-mean bound with φ ≡ 1.
    ConstantPowerMean,
    /// Power-mean bound with φ(t) = t^(s-1).
    PowerPowerMean,
    /// Hölder bound with φ ≡ 1.
    ConstantHolder,
    /// Hölder bound with φ(t) = t^(s-1).
    PowerHolder,
}

pub fn specialized_bound(
    which: Specialization,
    func: &TestFunction,
    params: &EvalParams,
    quad: &QuadratureSpec,
) -> Result<f64> {
    match which {
        Specialization::ConstantPowerMean => theorem1_bound(func, params, &PhiKernel::Constant, quad),
        Specialization::PowerPowerMean => theorem1_bound(func, params, &PhiKernel::power(params.require_s()?)?, quad),
        Specialization::ConstantHolder => theorem2_bound(func, params, &PhiKernel::Constant, quad),
        Specialization::PowerHolder => {
            theorem2_bound(func, params, &PhiKernel::power(params.require_s()?)?, quad)
        }
    }
}

/// The midpoint presets `x = (a+b)/2`, `λ ∈ {1/3, 0, 1}` that recover the
/// Simpson-, midpoint- and trapezoid-type special cases.
pub fn midpoint_presets(interval: Interval) -> [(f64, f64); 3] {
    let mid = interval.midpoint();
    [(1.0 / 3.0, mid), (0.0, mid), (1.0, mid)]
}

/// Closed-form coefficient expressions, evaluated literally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrintedCoef {
    /// `A₂` for φ ≡ 1.
    A2C,
    /// `A₃` for φ ≡ 1.
    A3C,
    /// `A₂` for φ(t) = t^(s-1).
    A4,
    /// `A₃` for φ(t) = t^(s-1), as a combination of incomplete Beta values.
    A5,
    /// `B = C₁ + C₂` through Beta, Gamma and ₂F₁.
    BClosed,
    C1,
    C2,
}

impl PrintedCoef {
    pub const ALL: [PrintedCoef; 7] = [
        PrintedCoef::A2C,
        PrintedCoef::A3C,
        PrintedCoef::A4,
        PrintedCoef::A5,
        PrintedCoef::BClosed,
        PrintedCoef::C1,
        PrintedCoef::C2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PrintedCoef::A2C => "A2C",
            PrintedCoef::A3C => "A3C",
            PrintedCoef::A4 => "A4",
            PrintedCoef::A5 => "A5",
            PrintedCoef::BClosed => "B_closed",
            PrintedCoef::C1 => "C1",
            PrintedCoef::C2 => "C2",
        }
    }

    pub fn needs_s(&self) -> bool {
        matches!(self, PrintedCoef::A4 | PrintedCoef::A5)
    }

    pub fn needs_p(&self) -> bool {
        matches!(self, PrintedCoef::BClosed | PrintedCoef::C1 | PrintedCoef::C2)
    }

    /// The quadrature oracle the closed form is meant to equal.
    pub fn oracle(&self, params: &EvalParams, quad: &QuadratureSpec) -> Result<f64> {
        let (alpha, lambda) = (params.alpha, params.lambda);
        match self {
            PrintedCoef::A2C => coef_weighted(alpha, lambda, &PhiKernel::Constant, WeightedCoef::A2, quad),
            PrintedCoef::A3C => coef_weighted(alpha, lambda, &PhiKernel::Constant, WeightedCoef::A3, quad),
            PrintedCoef::A4 => {
                let k = PhiKernel::power(params.require_s()?)?;
                coef_weighted(alpha, lambda, &k, WeightedCoef::A2, quad)
            }
            PrintedCoef::A5 => {
                let k = PhiKernel::power(params.require_s()?)?;
                coef_weighted(alpha, lambda, &k, WeightedCoef::A3, quad)
            }
            PrintedCoef::BClosed => coef_b(alpha, lambda, params.require_p()?, quad),
            PrintedCoef::C1 => coef_c1(alpha, lambda, params.require_p()?, quad),
            PrintedCoef::C2 => coef_c2(alpha, lambda, params.require_p()?, quad),
        }
    }
}

fn combine(parts: &[(f64, SpecFunResult)]) -> SpecFunResult {
    let value = parts.iter().map(|(c, r)| c * r.value).sum();
    let abs_err_estimate = parts.iter().map(|(c, r)| c.abs() * r.abs_err_estimate).sum();
    let rank = |m: Method| match m {
        Method::ClosedIdentity => 0,
        Method::Series => 1,
        Method::ContinuedExpansion => 2,
        Method::QuadratureFallback => 3,
    };
    let method = parts
        .iter()
        .map(|(_, r)| r.method)
        .max_by_key(|&m| rank(m))
        .unwrap_or(Method::ClosedIdentity);
    SpecFunResult {
        value,
        abs_err_estimate,
        method,
    }
}

fn closed(value: f64) -> SpecFunResult {
    SpecFunResult {
        value,
        abs_err_estimate: 8.0 * f64::EPSILON * value.abs(),
        method: Method::ClosedIdentity,
    }
}

/// `λ^e`, with `0^e = 0` for positive `e`.
fn lambda_pow(lambda: f64, e: f64) -> f64 {
    if lambda == 0.0 {
        0.0
    } else {
        lambda.powf(e)
    }
}

/// Incomplete Beta that treats an empty range as zero.
fn ibeta_or_zero(upper: f64, x: f64, y: f64) -> Result<SpecFunResult> {
    if upper == 0.0 {
        Ok(closed(0.0))
    } else {
        Ok(incomplete_beta(upper, x, y)?)
    }
}

/// Evaluates a closed-form coefficient expression exactly as written, for
/// comparison against [`PrintedCoef::oracle`]. Undefined subterms (such as a
/// complete Beta with a negative parameter) are returned as errors.
pub fn printed_coefficient(name: PrintedCoef, params: &EvalParams) -> Result<SpecFunResult> {
    let (alpha, lambda) = (params.alpha, params.lambda);
    check_alpha_lambda(alpha, lambda)?;
    match name {
        PrintedCoef::A2C => {
            let v = (3.0 - (alpha + 3.0) * lambda + 2.0 * alpha * lambda_pow(lambda, 1.0 + 3.0 / alpha))
                / (3.0 * (alpha + 3.0));
            Ok(closed(v))
        }
        PrintedCoef::A3C => {
            let v = alpha * lambda_pow(lambda, 1.0 + 2.0 / alpha) / (alpha + 2.0)
                - 2.0 * lambda_pow(lambda, 1.0 + 3.0 / alpha) / (3.0 * (alpha + 3.0))
                + alpha * lambda / 6.0
                - alpha / ((alpha + 2.0) * (alpha + 3.0));
            Ok(closed(v))
        }
        PrintedCoef::A4 => {
            let s = params.require_s()?;
            let pw = lambda_pow(lambda, (s + 2.0) / alpha + 1.0);
            let v = 2.0 * pw / (s + 2.0) - 2.0 * pw / (alpha + s + 2.0) + 1.0 / (alpha + s + 2.0);
            Ok(closed(v))
        }
        PrintedCoef::A5 => {
            let s = params.require_s()?;
            let k = kink(alpha, lambda);
            Ok(combine(&[
                (lambda, ibeta_or_zero(k, 2.0, s + 1.0)?),
                (-1.0, ibeta_or_zero(k, alpha + 2.0, s + 1.0)?),
                (1.0, ibeta_or_zero(1.0 - k, alpha + 2.0, s + 1.0)?),
                (-lambda, ibeta_or_zero(1.0 - k, 2.0, s + 1.0)?),
            ]))
        }
        PrintedCoef::C1 => printed_c1(alpha, lambda, params.require_p()?),
        PrintedCoef::C2 => printed_c2(alpha, lambda, params.require_p()?),
        PrintedCoef::BClosed => {
            let p = params.require_p()?;
            let c1 = printed_c1(alpha, lambda, p)?;
            let c2 = printed_c2(alpha, lambda, p)?;
            Ok(combine(&[(1.0, c1), (1.0, c2)]))
        }
    }
}

fn printed_c1(alpha: f64, lambda: f64, p: f64) -> Result<SpecFunResult> {
    let e = (1.0 + p + alpha * p) / alpha;
    let front = lambda_pow(lambda, e) / alpha;
    let g = gamma(1.0 + p)? * gamma((1.0 + p + alpha) / alpha)?;
    let h = gauss_2f1(1.0, 1.0 + p, 2.0 + p + (1.0 + p) / alpha, 1.0)?;
    Ok(SpecFunResult {
        value: front * g * h.value,
        abs_err_estimate: (front * g).abs() * h.abs_err_estimate,
        method: h.method,
    })
}

fn printed_c2(alpha: f64, lambda: f64, p: f64) -> Result<SpecFunResult> {
    let e = (1.0 + p + alpha * p) / alpha;
    let front = lambda_pow(lambda, e) / alpha;
    let complete = beta_fn(1.0 + p, -e)?;
    let partial = incomplete_beta(lambda, 1.0 + p, -e)?;
    Ok(combine(&[(front, closed(complete)), (-front, partial)]))
}

/// Oracle coefficients at one parameter point, with printed-vs-oracle
/// residuals for every closed form that is defined there.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: Option<f64>,
    pub a5: Option<f64>,
    pub b_coef: Option<f64>,
    pub oracle_residuals: BTreeMap<String, f64>,
}

pub fn coefficient_set(params: &EvalParams, kernel: &PhiKernel, quad: &QuadratureSpec) -> Result<CoefficientSet> {
    params.validate()?;
    let (alpha, lambda) = (params.alpha, params.lambda);
    let t1 = Theorem1Coefficients::compute(alpha, lambda, kernel, quad)?;
    let mut residuals = BTreeMap::new();
    residuals.insert("A1".to_string(), (t1.a1 - coef_a1_oracle(alpha, lambda, quad)?).abs());

    let (mut a4, mut a5) = (None, None);
    if let Some(s) = params.s {
        let k = PhiKernel::power(s)?;
        a4 = Some(coef_weighted(alpha, lambda, &k, WeightedCoef::A2, quad)?);
        a5 = Some(coef_weighted(alpha, lambda, &k, WeightedCoef::A3, quad)?);
    }
    let b_coef = match params.p {
        Some(p) => Some(coef_b(alpha, lambda, p, quad)?),
        None => None,
    };

    for name in PrintedCoef::ALL {
        if (name.needs_s() && params.s.is_none()) || (name.needs_p() && params.p.is_none()) {
            continue;
        }
        let oracle = match name {
            PrintedCoef::A2C if *kernel == PhiKernel::Constant => t1.a2,
            PrintedCoef::A3C if *kernel == PhiKernel::Constant => t1.a3,
            PrintedCoef::A4 => a4.expect("s is set"),
            PrintedCoef::A5 => a5.expect("s is set"),
            PrintedCoef::BClosed => b_coef.expect("p is set"),
            _ => name.oracle(params, quad)?,
        };
        if let Ok(printed) = printed_coefficient(name, params) {
            residuals.insert(name.name().to_string(), (printed.value - oracle).abs());
        }
    }

    Ok(CoefficientSet {
        a1: t1.a1,
        a2: t1.a2,
        a3: t1.a3,
        a4,
        a5,
        b_coef,
        oracle_residuals: residuals,
    })
}
