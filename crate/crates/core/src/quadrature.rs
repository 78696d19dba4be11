//! Adaptive Gauss-Kronrod integration on a finite interval.
//!
//! The integrator works on panels delimited by caller-supplied split points
//! (kinks). An algebraic endpoint singularity `(t - lo)^e` with `-1 < e < 0`
//! is removed by the substitution `t = lo + u^m`, `m = 1/(1+e)`, which turns
//! the integrand `(t - lo)^e g(t)` into the bounded `m g(lo + u^m)`. The same
//! substitution is applied at the right end when `right_exponent` is set.
//!
//! Panels are refined globally: the panel with the largest error estimate is
//! bisected until the summed estimate meets `max(abs_tol, rel_tol * |value|)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

/// Kronrod abscissae on [-1, 1], positive half, outermost first.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss 7-point weights for abscissae XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("invalid quadrature request: {0}")]
    InvalidSpec(String),
    #[error(
        "tolerance not met after {subdivisions} subdivisions (value {value:e}, error estimate {err_estimate:e})"
    )]
    ToleranceNotMet {
        value: f64,
        err_estimate: f64,
        subdivisions: usize,
    },
    #[error("integrand returned a non-finite value at t = {at}")]
    NonFiniteSample { at: f64 },
}

/// Tolerances, kink locations and declared endpoint singularities.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Interior points where the integrand is not smooth. Must be sorted and
    /// strictly inside the integration interval.
    pub split_points: Vec<f64>,
    /// Exponent `e` of a `(t - lo)^e` factor; 0 means regular.
    pub left_exponent: f64,
    /// Exponent `e` of a `(hi - t)^e` factor; 0 means regular.
    pub right_exponent: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            split_points: Vec::new(),
            left_exponent: 0.0,
            right_exponent: 0.0,
        }
    }
}

impl QuadratureSpec {
    /// Same tolerances, no splits and no declared singularities.
    pub fn tolerances_only(&self) -> Self {
        Self {
            split_points: Vec::new(),
            left_exponent: 0.0,
            right_exponent: 0.0,
            ..self.clone()
        }
    }

    pub fn with_split_points(mut self, points: Vec<f64>) -> Self {
        self.split_points = points;
        self
    }

    pub fn with_left_exponent(mut self, e: f64) -> Self {
        self.left_exponent = e;
        self
    }

    pub fn with_right_exponent(mut self, e: f64) -> Self {
        self.right_exponent = e;
        self
    }

    /// Divides both tolerances by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            ..self.clone()
        }
    }

    fn validate(&self, lo: f64, hi: f64) -> Result<(), QuadError> {
        let bad = |msg: String| Err(QuadError::InvalidSpec(msg));
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return bad(format!("need finite lo < hi, got [{lo}, {hi}]"));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return bad("tolerances must be positive".into());
        }
        if self.max_subdivisions == 0 {
            return bad("max_subdivisions must be positive".into());
        }
        if !(self.left_exponent > -1.0 && self.right_exponent > -1.0) {
            return bad("endpoint exponents must exceed -1".into());
        }
        let mut prev = lo;
        for &p in &self.split_points {
            if !(p > prev && p < hi) {
                return bad(format!(
                    "split points must be increasing and strictly inside ({lo}, {hi})"
                ));
            }
            prev = p;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub subdivisions_used: usize,
}

/// How a panel's local variable `u` maps back to `t`.
#[derive(Debug, Clone, Copy)]
enum Chart {
    Identity,
    /// t = anchor + u^m
    FromLeft { anchor: f64, m: f64 },
    /// t = anchor - u^m
    FromRight { anchor: f64, m: f64 },
}

impl Chart {
    fn singular(exponent: f64) -> Option<f64> {
        (exponent < 0.0).then(|| 1.0 / (1.0 + exponent))
    }

    #[inline]
    fn eval<F: Fn(f64) -> f64>(&self, f: &F, u: f64) -> (f64, f64) {
        match *self {
            Chart::Identity => (u, f(u)),
            Chart::FromLeft { anchor, m } => {
                let t = anchor + u.powf(m);
                (t, f(t) * m * u.powf(m - 1.0))
            }
            Chart::FromRight { anchor, m } => {
                let t = anchor - u.powf(m);
                (t, f(t) * m * u.powf(m - 1.0))
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    chart: usize,
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.chart.cmp(&self.chart))
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 15-point Kronrod evaluation with embedded 7-point Gauss estimate.
fn gk15<F: Fn(f64) -> f64>(f: &F, chart: &Chart, lo: f64, hi: f64) -> Result<(f64, f64), QuadError> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let sample = |u: f64| -> Result<f64, QuadError> {
        let (t, v) = chart.eval(f, u);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFiniteSample { at: t })
        }
    };

    let f_center = sample(center)?;
    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = sample(center - dx)?;
        let f2 = sample(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let value = res_kronrod * half;
    let err = rescale_error((res_kronrod - res_gauss) * half, res_abs * h, res_asc * h);
    Ok((value, err))
}

/// Integrates `f` over `[lo, hi]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, QuadError> {
    spec.validate(lo, hi)?;

    let mut breaks = Vec::with_capacity(spec.split_points.len() + 2);
    breaks.push(lo);
    breaks.extend_from_slice(&spec.split_points);
    breaks.push(hi);

    let left_m = Chart::singular(spec.left_exponent);
    let right_m = Chart::singular(spec.right_exponent);
    if left_m.is_some() && right_m.is_some() && breaks.len() == 2 {
        breaks.insert(1, 0.5 * (lo + hi));
    }

    let last = breaks.len() - 2;
    let mut charts = Vec::with_capacity(last + 1);
    let mut ranges = Vec::with_capacity(last + 1);
    for (i, w) in breaks.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        match (i, left_m, right_m) {
            (0, Some(m), _) => {
                charts.push(Chart::FromLeft { anchor: a, m });
                ranges.push((0.0, (b - a).powf(1.0 / m)));
            }
            (i, _, Some(m)) if i == last => {
                charts.push(Chart::FromRight { anchor: b, m });
                // u runs from (b - a)^(1/m) down to 0; orient it increasing in t
                // by integrating over [0, umax] (the map reverses direction and
                // dt = -m u^(m-1) du, so the signs cancel).
                ranges.push((0.0, (b - a).powf(1.0 / m)));
            }
            _ => {
                charts.push(Chart::Identity);
                ranges.push((a, b));
            }
        }
    }

    let mut heap = BinaryHeap::new();
    for (chart, &(a, b)) in ranges.iter().enumerate() {
        let (value, error) = gk15(&f, &charts[chart], a, b)?;
        heap.push(Panel {
            chart,
            lo: a,
            hi: b,
            value,
            error,
        });
    }
    let mut frozen: Vec<Panel> = Vec::new();

    let totals = |heap: &BinaryHeap<Panel>, frozen: &[Panel]| {
        let mut panels: Vec<&Panel> = heap.iter().chain(frozen.iter()).collect();
        panels.sort_by(|p, q| p.chart.cmp(&q.chart).then(p.lo.total_cmp(&q.lo)));
        panels
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
    };

    let (mut value, mut error) = totals(&heap, &frozen);
    let mut subdivisions = heap.len();
    while error > spec.abs_tol.max(spec.rel_tol * value.abs()) {
        if subdivisions >= spec.max_subdivisions {
            return Err(QuadError::ToleranceNotMet {
                value,
                err_estimate: error,
                subdivisions,
            });
        }
        let Some(worst) = heap.pop() else {
            return Err(QuadError::ToleranceNotMet {
                value,
                err_estimate: error,
                subdivisions,
            });
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Panel cannot be bisected in floating point.
            frozen.push(worst);
            continue;
        }
        let chart = &charts[worst.chart];
        let (lv, le) = gk15(&f, chart, worst.lo, mid)?;
        let (rv, re) = gk15(&f, chart, mid, worst.hi)?;
        value += lv + rv - worst.value;
        error += le + re - worst.error;
        heap.push(Panel {
            chart: worst.chart,
            lo: worst.lo,
            hi: mid,
            value: lv,
            error: le,
        });
        heap.push(Panel {
            chart: worst.chart,
            lo: mid,
            hi: worst.hi,
            value: rv,
            error: re,
        });
        subdivisions += 1;
    }

    let (value, err_estimate) = totals(&heap, &frozen);
    Ok(QuadResult {
        value,
        err_estimate,
        subdivisions_used: subdivisions,
    })
}

/// Integrates `|base(t)|` over `[0, 1]`, splitting at the sign change `kink`.
///
/// A kink on or outside the boundary adds no split.
pub fn integrate_kinked_abs<F: Fn(f64) -> f64>(
    base: F,
    kink: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, QuadError> {
    let spec = spec.clone().with_split_points(merge_split(&spec.split_points, kink, 0.0, 1.0));
    integrate(|t| base(t).abs(), 0.0, 1.0, &spec)
}

/// Inserts `point` into a sorted split list if it is strictly inside `(lo, hi)`
/// and not already present.
pub fn merge_split(existing: &[f64], point: f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut out: Vec<f64> = existing.to_vec();
    if point > lo && point < hi && !out.contains(&point) {
        out.push(point);
        out.sort_by(f64::total_cmp);
    }
    out
}
