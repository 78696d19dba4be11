use thiserror::Error;

use crate::quadrature::QuadError;
use crate::specfun::SpecFunError;

/// Error type shared by the fractional-integral, convexity, bound and
/// verification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
