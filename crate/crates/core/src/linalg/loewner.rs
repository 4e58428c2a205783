use serde::{Deserialize, Serialize};

use super::eigh::eigh;
use super::matrix::HermitianMatrix;
use super::norm::operator_norm;
use crate::error::Result;

/// Default relative tolerance for every `<=` between matrices.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Outcome of one order comparison `X <= Y`.
///
/// `pass` holds exactly when `margin >= -tol * scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub margin: f64,
    pub scale: f64,
    pub pass: bool,
}

impl ComparisonResult {
    pub fn new(margin: f64, scale: f64, tol: f64) -> Self {
        Self {
            margin,
            scale,
            pass: margin >= -tol * scale,
        }
    }

    /// Scalar comparison `x <= y`, scaled by `1 + |y|`.
    pub fn scalar(x: f64, y: f64, tol: f64) -> Self {
        Self::new(y - x, 1.0 + y.abs(), tol)
    }
}

/// Loewner comparison `X <= Y`: margin is `lambda_min(Y - X)`, scale `1 + ||Y||`.
pub fn loewner_leq(x: &HermitianMatrix, y: &HermitianMatrix, tol: f64) -> Result<ComparisonResult> {
    x.as_matrix().ensure_same_dim(y.as_matrix())?;
    let margin = eigh(&y.sub(x))?.min();
    let scale = 1.0 + operator_norm(y)?;
    Ok(ComparisonResult::new(margin, scale, tol))
}
