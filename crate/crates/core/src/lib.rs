#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod convexity;
pub mod error;
pub mod expr;
pub mod fracint;
pub mod function;
pub mod quadrature;
pub mod report;
pub mod selftest;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
