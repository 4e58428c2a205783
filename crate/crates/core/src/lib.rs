//! Numerical verification of coefficient inequalities for matrix means,
//! functional calculus on Hermitian and normal matrices, unitarily invariant
//! norms and determinants.

// NaN must fail validation, so `!(x > 0.0)` is intended throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod functions;
pub mod harness;
pub mod inequalities;
pub mod linalg;
pub mod means;
pub mod randgen;

pub use error::{Error, Result};
