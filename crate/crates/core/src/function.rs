//! Test functions with their first two derivatives, and the built-in registry.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fracint::Interval;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A twice-differentiable function bundle `(f, f', f'')` on a domain.
#[derive(Clone)]
pub struct TestFunction {
    pub name: String,
    pub f: ScalarFn,
    pub f1: ScalarFn,
    pub f2: ScalarFn,
    pub domain: Interval,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl TestFunction {
    pub fn from_closures<F, F1, F2>(name: &str, domain: Interval, f: F, f1: F1, f2: F2) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        F1: Fn(f64) -> f64 + Send + Sync + 'static,
        F2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.to_string(),
            f: Arc::new(f),
            f1: Arc::new(f1),
            f2: Arc::new(f2),
            domain,
        }
    }

    /// Builds `f` from an expression, differentiating it symbolically.
    pub fn from_expr(name: &str, source: &str, domain: Interval) -> Result<Self> {
        let e = Expr::parse(source).map_err(|err| Error::InvalidParams(err.to_string()))?;
        let d1 = e.derivative();
        let d2 = d1.derivative();
        Ok(Self::from_closures(
            name,
            domain,
            move |t| e.eval(t),
            move |t| d1.eval(t),
            move |t| d2.eval(t),
        ))
    }

    /// The same function restricted to a subinterval of its domain.
    pub fn restricted(&self, interval: Interval) -> Result<Self> {
        if !self.domain.contains_interval(&interval) {
            return Err(Error::InvalidParams(format!(
                "[{}, {}] is not inside the domain [{}, {}] of {}",
                interval.a, interval.b, self.domain.a, self.domain.b, self.name
            )));
        }
        Ok(Self {
            domain: interval,
            ..self.clone()
        })
    }

    pub fn value(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn d1(&self, t: f64) -> f64 {
        (self.f1)(t)
    }

    pub fn d2(&self, t: f64) -> f64 {
        (self.f2)(t)
    }
}

/// One entry of the built-in registry.
#[derive(Debug, Clone, Copy)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub expression: &'static str,
    pub a: f64,
    pub b: f64,
    /// Whether |f''| is expected to be convex (hypotheses met for q ≥ 1).
    pub convex_second_derivative: bool,
}

/// Equality cases (t², t³), strict cases (t⁴, eᵗ, -ln t) and a control whose
/// second derivative √t is concave.
pub const REGISTRY: &[RegistryEntry] = &[
    RegistryEntry {
        name: "square",
        expression: "t^2",
        a: 0.0,
        b: 1.0,
        convex_second_derivative: true,
    },
    RegistryEntry {
        name: "cube",
        expression: "t^3",
        a: 0.0,
        b: 1.0,
        convex_second_derivative: true,
    },
    RegistryEntry {
        name: "quartic",
        expression: "t^4",
        a: 0.0,
        b: 1.0,
        convex_second_derivative: true,
    },
    RegistryEntry {
        name: "exp",
        expression: "exp(t)",
        a: 0.0,
        b: 1.0,
        convex_second_derivative: true,
    },
    RegistryEntry {
        name: "neglog",
        expression: "-ln(t)",
        a: 0.5,
        b: 2.0,
        convex_second_derivative: true,
    },
    RegistryEntry {
        name: "sqrt_control",
        expression: "4/15*t^2.5",
        a: 0.0,
        b: 1.0,
        convex_second_derivative: false,
    },
];

pub fn registry_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|e| e.name).collect()
}

pub fn registry_function(name: &str) -> Option<TestFunction> {
    REGISTRY.iter().find(|e| e.name == name).map(|e| {
        TestFunction::from_expr(e.name, e.expression, Interval { a: e.a, b: e.b })
            .expect("registry expressions parse")
    })
}

/// Resolves a registry name, or else parses `spec` as an expression on
/// `default_domain`.
pub fn resolve_function(spec: &str, default_domain: Interval) -> Result<TestFunction> {
    match registry_function(spec) {
        Some(f) => Ok(f),
        None => TestFunction::from_expr(spec, spec, default_domain),
    }
}
