//! Command-line flags, the JSON config file, and the validated run config.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Deserialize;
use thiserror::Error;

use phi_ineq_core::bounds::{conjugate_exponent, EvalParams};
use phi_ineq_core::convexity::PhiKernel;
use phi_ineq_core::fracint::Interval;
use phi_ineq_core::function::{resolve_function, TestFunction};
use phi_ineq_core::quadrature::QuadratureSpec;
use phi_ineq_core::report::LedgerGrid;
use phi_ineq_core::verify::{SweepPlan, Theorem, VerifyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Selftest,
    Verify,
    Sweep,
    Coeffs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelName {
    Constant,
    Power,
    Mt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremName {
    T1,
    T2,
    Hh,
    Lemma1,
}

impl From<TheoremName> for Theorem {
    fn from(t: TheoremName) -> Self {
        match t {
            TheoremName::T1 => Theorem::T1,
            TheoremName::T2 => Theorem::T2,
            TheoremName::Hh => Theorem::HH,
            TheoremName::Lemma1 => Theorem::Lemma1,
        }
    }
}

/// Verify fractional-integral inequalities for functions whose second
/// derivative is phi-convex.
///
/// For `verify`, every parameter takes one value and `--x` is a point of
/// [a, b]. For `sweep`, parameters take comma-separated lists and `--x`
/// lists relative positions in [0, 1] inside each function's interval.
/// For `coeffs`, `--alpha`, `--lambda`, `--s` and `--q` set the ledger grid
/// (p is derived from q).
#[derive(Debug, Parser)]
#[command(name = "phi-ineq", version, allow_negative_numbers = true)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Registry name or expression in t (comma-separated for sweep).
    #[arg(long = "fn", value_delimiter = ',')]
    pub functions: Vec<String>,
    /// Left end of the interval (default: the function's own domain).
    #[arg(long)]
    pub a: Option<f64>,
    /// Right end of the interval.
    #[arg(long)]
    pub b: Option<f64>,
    /// Evaluation point (verify) or relative positions in [0, 1] (sweep).
    #[arg(long, value_delimiter = ',')]
    pub x: Vec<f64>,
    /// Weight lambda in [0, 1].
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<f64>,
    /// Fractional order alpha > 0.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
    /// Power q >= 1; the Hölder bound uses p = q/(q-1).
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<f64>,
    /// Index of the power kernel phi(t) = t^(s-1).
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<f64>,
    /// Weight phi: constant (1), power (t^(s-1)) or mt.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub kernel: Vec<KernelName>,
    /// t1 (power mean), t2 (Hölder), hh (Hermite-Hadamard), lemma1 (identity).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub theorem: Vec<TheoremName>,
    /// JSON file with the same keys as the long flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format (default csv).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Relative quadrature tolerance.
    #[arg(long = "quad-tol")]
    pub quad_tol: Option<f64>,
    /// Scales every theorem bound; for testing the failure path.
    #[arg(long = "fault-rhs-scale", hide = true)]
    pub fault_rhs_scale: Option<f64>,
}

/// A scalar or a list in the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "fn")]
    pub functions: Option<OneOrMany<String>>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub x: Option<OneOrMany<f64>>,
    pub lambda: Option<OneOrMany<f64>>,
    pub alpha: Option<OneOrMany<f64>>,
    pub q: Option<OneOrMany<f64>>,
    pub s: Option<OneOrMany<f64>>,
    pub kernel: Option<OneOrMany<KernelName>>,
    pub theorem: Option<OneOrMany<TheoremName>>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub quad_tol: Option<f64>,
}

impl FileConfig {
    pub fn from_json(text: &str) -> Result<Self, UsageError> {
        serde_json::from_str(text).map_err(|e| UsageError(vec![format!("config file: {e}")]))
    }
}

/// Every problem found while building a [`RunConfig`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", .0.join("\n"))]
pub struct UsageError(pub Vec<String>);

#[derive(Debug, Clone)]
pub enum Job {
    Selftest,
    Verify {
        function: TestFunction,
        params: EvalParams,
        kernel: PhiKernel,
        theorem: Theorem,
    },
    Sweep(SweepPlan),
    Coeffs(LedgerGrid),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub job: Job,
    pub options: VerifyOptions,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// Merged, not yet validated values.
struct Raw {
    functions: Vec<String>,
    a: Option<f64>,
    b: Option<f64>,
    x: Vec<f64>,
    lambda: Vec<f64>,
    alpha: Vec<f64>,
    q: Vec<f64>,
    s: Vec<f64>,
    kernel: Vec<KernelName>,
    theorem: Vec<TheoremName>,
    out: Option<PathBuf>,
    format: Format,
    quad_tol: Option<f64>,
    fault_rhs_scale: Option<f64>,
}

fn pick<T>(flag: Vec<T>, file: Option<OneOrMany<T>>) -> Vec<T> {
    if flag.is_empty() {
        file.map(OneOrMany::into_vec).unwrap_or_default()
    } else {
        flag
    }
}

fn merge(cli: Cli, file: FileConfig) -> Raw {
    Raw {
        functions: pick(cli.functions, file.functions),
        a: cli.a.or(file.a),
        b: cli.b.or(file.b),
        x: pick(cli.x, file.x),
        lambda: pick(cli.lambda, file.lambda),
        alpha: pick(cli.alpha, file.alpha),
        q: pick(cli.q, file.q),
        s: pick(cli.s, file.s),
        kernel: pick(cli.kernel, file.kernel),
        theorem: pick(cli.theorem, file.theorem),
        out: cli.out.or(file.out),
        format: cli.format.or(file.format).unwrap_or_default(),
        quad_tol: cli.quad_tol.or(file.quad_tol),
        fault_rhs_scale: cli.fault_rhs_scale,
    }
}

fn single(name: &str, values: &[f64], default: Option<f64>, errors: &mut Vec<String>) -> Option<f64> {
    match values {
        [] => {
            if default.is_none() {
                errors.push(format!("--{name} is required"));
            }
            default
        }
        [v] => Some(*v),
        _ => {
            errors.push(format!("--{name} takes a single value for verify, got {}", values.len()));
            None
        }
    }
}

fn kernels(names: &[KernelName], s: &[f64], errors: &mut Vec<String>) -> Vec<PhiKernel> {
    let mut out = Vec::new();
    for name in names {
        match name {
            KernelName::Constant => out.push(PhiKernel::Constant),
            KernelName::Mt => out.push(PhiKernel::Mt),
            KernelName::Power => {
                if s.is_empty() {
                    errors.push("--kernel power needs --s".into());
                }
                for &v in s {
                    match PhiKernel::power(v) {
                        Ok(k) => out.push(k),
                        Err(_) => errors.push(format!("s must lie in (0, 1], got {v}")),
                    }
                }
            }
        }
    }
    out
}

fn interval(raw: &Raw, errors: &mut Vec<String>) -> Option<Interval> {
    match (raw.a, raw.b) {
        (None, None) => None,
        (Some(a), Some(b)) => match Interval::new(a, b) {
            Ok(iv) => Some(iv),
            Err(_) => {
                errors.push(format!("interval must satisfy a < b (finite), got [{a}, {b}]"));
                None
            }
        },
        _ => {
            errors.push("--a and --b must be given together".into());
            None
        }
    }
}

fn resolve(spec: &str, iv: Option<Interval>, errors: &mut Vec<String>) -> Option<TestFunction> {
    let f = match resolve_function(spec, iv.unwrap_or_else(Interval::unit)) {
        Ok(f) => f,
        Err(e) => {
            errors.push(format!("--fn {spec}: {e}"));
            return None;
        }
    };
    match iv {
        Some(iv) if f.domain != iv => match f.restricted(iv) {
            Ok(f) => Some(f),
            Err(e) => {
                errors.push(e.to_string());
                None
            }
        },
        _ => Some(f),
    }
}

fn options(raw: &Raw, errors: &mut Vec<String>) -> VerifyOptions {
    let mut opts = VerifyOptions::default();
    if let Some(tol) = raw.quad_tol {
        if tol > 0.0 && tol < 1.0 {
            opts.quad = QuadratureSpec {
                rel_tol: tol,
                abs_tol: (tol * 1e-2).min(opts.quad.abs_tol),
                ..opts.quad
            };
        } else {
            errors.push(format!("--quad-tol must lie in (0, 1), got {tol}"));
        }
    }
    if let Some(scale) = raw.fault_rhs_scale {
        opts.rhs_scale = scale;
    }
    opts
}

fn verify_job(raw: &Raw, errors: &mut Vec<String>) -> Option<Job> {
    let iv = interval(raw, errors);
    let function = match raw.functions.as_slice() {
        [] => {
            errors.push("--fn is required for verify".into());
            None
        }
        [spec] => resolve(spec, iv, errors),
        _ => {
            errors.push("--fn takes a single function for verify".into());
            None
        }
    };
    let domain = function.as_ref().map(|f| f.domain).or(iv).unwrap_or_else(Interval::unit);
    let x = single("x", &raw.x, Some(domain.midpoint()), errors);
    let lambda = single("lambda", &raw.lambda, Some(0.0), errors);
    let alpha = single("alpha", &raw.alpha, Some(1.0), errors);
    let q = single("q", &raw.q, Some(1.0), errors);
    if raw.s.len() > 1 {
        errors.push("--s takes a single value for verify".into());
    }
    let kernel = match raw.kernel.as_slice() {
        [] => Some(PhiKernel::Constant),
        [k] => kernels(&[*k], &raw.s, errors).pop(),
        _ => {
            errors.push("--kernel takes a single value for verify".into());
            None
        }
    };
    let theorem: Theorem = match raw.theorem.as_slice() {
        [] => Theorem::T1,
        [t] => (*t).into(),
        _ => {
            errors.push("--theorem takes a single value for verify".into());
            Theorem::T1
        }
    };
    let (x, lambda, alpha, q) = (x?, lambda?, alpha?, q?);
    let mut params = EvalParams {
        interval: domain,
        x,
        lambda,
        alpha,
        q,
        p: conjugate_exponent(q),
        s: raw.s.first().copied(),
    };
    if !(q > 1.0) && theorem == Theorem::T2 {
        errors.push(format!("theorem t2 needs q > 1 so that p = q/(q-1) exists, got q = {q}"));
    }
    if params.s.is_some() && !matches!(kernel, Some(PhiKernel::PowerS(_))) {
        params.s = None;
    }
    errors.extend(params.violations());
    Some(Job::Verify {
        function: function?,
        params,
        kernel: kernel?,
        theorem,
    })
}

fn sweep_job(raw: &Raw, opts: &VerifyOptions, errors: &mut Vec<String>) -> Option<Job> {
    let iv = interval(raw, errors);
    let mut plan = SweepPlan::default_plan();
    plan.options = opts.clone();
    if !raw.functions.is_empty() || iv.is_some() {
        let specs: Vec<String> = if raw.functions.is_empty() {
            plan.functions.iter().map(|f| f.name.clone()).collect()
        } else {
            raw.functions.clone()
        };
        plan.functions = specs.iter().filter_map(|s| resolve(s, iv, errors)).collect();
    }
    if !raw.kernel.is_empty() {
        plan.kernels = kernels(&raw.kernel, &raw.s, errors);
    } else if !raw.s.is_empty() {
        plan.kernels = [PhiKernel::Constant, PhiKernel::Mt]
            .into_iter()
            .chain(kernels(&[KernelName::Power], &raw.s, errors))
            .collect();
    }
    if !raw.theorem.is_empty() {
        plan.theorems = raw.theorem.iter().map(|&t| t.into()).collect();
    }
    for (list, values) in [
        (&mut plan.x_positions, &raw.x),
        (&mut plan.lambdas, &raw.lambda),
        (&mut plan.alphas, &raw.alpha),
        (&mut plan.qs, &raw.q),
    ] {
        if !values.is_empty() {
            *list = values.clone();
        }
    }
    errors.extend(plan.violations());
    Some(Job::Sweep(plan))
}

fn coeffs_job(raw: &Raw, errors: &mut Vec<String>) -> Option<Job> {
    let mut grid = LedgerGrid::default();
    if !raw.alpha.is_empty() {
        grid.alphas = raw.alpha.clone();
    }
    if !raw.lambda.is_empty() {
        grid.lambdas = raw.lambda.clone();
    }
    if !raw.s.is_empty() {
        grid.ss = raw.s.clone();
    }
    if !raw.q.is_empty() {
        grid.ps = Vec::new();
        for &q in &raw.q {
            match conjugate_exponent(q) {
                Some(p) if q.is_finite() => grid.ps.push(p),
                _ => errors.push(format!("coeffs derives p from q, so q must be > 1, got {q}")),
            }
        }
    }
    for &a in &grid.alphas {
        if !(a > 0.0 && a.is_finite()) {
            errors.push(format!("alpha must be > 0, got {a}"));
        }
    }
    for &l in &grid.lambdas {
        if !(0.0..=1.0).contains(&l) {
            errors.push(format!("lambda must lie in [0, 1], got {l}"));
        }
    }
    for &s in &grid.ss {
        if !(s > 0.0 && s <= 1.0) {
            errors.push(format!("s must lie in (0, 1], got {s}"));
        }
    }
    Some(Job::Coeffs(grid))
}

/// Merges flags over the config file and validates the result.
pub fn build_config(cli: Cli, file: Option<FileConfig>) -> Result<RunConfig, UsageError> {
    let command = cli.command;
    let raw = merge(cli, file.unwrap_or_default());
    let mut errors = Vec::new();
    let options = options(&raw, &mut errors);
    let job = match command {
        Command::Selftest => Some(Job::Selftest),
        Command::Verify => verify_job(&raw, &mut errors),
        Command::Sweep => sweep_job(&raw, &options, &mut errors),
        Command::Coeffs => coeffs_job(&raw, &mut errors),
    };
    match job {
        Some(job) if errors.is_empty() => Ok(RunConfig {
            command,
            job,
            options,
            out: raw.out,
            format: raw.format,
        }),
        _ => Err(UsageError(errors)),
    }
}

/// Parses arguments, reading `--config` when given.
pub fn parse_config<I, T>(args: I, config_text: Option<&str>) -> Result<RunConfig, ParseOutcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(ParseOutcome::Clap)?;
    let file = match (config_text, &cli.config) {
        (Some(text), _) => Some(FileConfig::from_json(text).map_err(ParseOutcome::Usage)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| {
                ParseOutcome::Usage(UsageError(vec![format!("cannot read {}: {e}", path.display())]))
            })?;
            Some(FileConfig::from_json(&text).map_err(ParseOutcome::Usage)?)
        }
        (None, None) => None,
    };
    build_config(cli, file).map_err(ParseOutcome::Usage)
}

/// Why no run config was produced.
#[derive(Debug)]
pub enum ParseOutcome {
    /// Help, version, or a malformed command line.
    Clap(clap::Error),
    Usage(UsageError),
}
