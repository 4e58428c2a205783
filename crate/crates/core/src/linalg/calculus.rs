//! Spectral functional calculus and the helpers built on it.

use super::eigh::{eigh, Spectrum};
use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};
use crate::functions::ScalarFunction;

/// `f(A) = U diag(f(lambda_j)) U*`. Every eigenvalue must lie in `f`'s domain.
pub fn apply_fn(f: &ScalarFunction, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    apply_fn_spectrum(f, &eigh(a)?)
}

pub fn apply_fn_spectrum(f: &ScalarFunction, s: &Spectrum) -> Result<HermitianMatrix> {
    let mapped = s
        .values
        .iter()
        .map(|&x| f.try_eval(x))
        .collect::<Result<Vec<f64>>>()?;
    Ok(s.rebuild(&mapped))
}

/// `|A| = (A*A)^{1/2}`.
///
/// With `normal_hint` and Hermitian input the result is `U |Lambda| U*` from a
/// single eigendecomposition of `A`, which avoids squaring the condition
/// number. Otherwise the square root of the Gram matrix is taken.
pub fn matrix_abs(a: &ComplexMatrix, normal_hint: bool) -> Result<HermitianMatrix> {
    if normal_hint && a.hermitian_defect() <= 1e-14 * (1.0 + a.max_abs()) {
        let s = eigh(&HermitianMatrix::from_matrix(a))?;
        return Ok(s.map(f64::abs));
    }
    let gram = HermitianMatrix::from_matrix(&(&a.adjoint() * a));
    Ok(eigh(&gram)?.map(|x| x.max(0.0).sqrt()))
}

fn clamped_psd_values(a: &HermitianMatrix, tol: f64) -> Result<Vec<f64>> {
    let s = eigh(a)?;
    let scale = 1.0 + s.max().abs().max(s.min().abs());
    if s.min() < -tol * scale {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: s.min(),
        });
    }
    Ok(s.values.into_iter().map(|x| x.max(0.0)).collect())
}

/// `(det A)^{1/n}` for positive semidefinite `A`; round-off negatives are clamped to 0.
pub fn det_root(a: &HermitianMatrix, tol: f64) -> Result<f64> {
    let vals = clamped_psd_values(a, tol)?;
    let n = vals.len() as f64;
    Ok(vals.iter().product::<f64>().powf(1.0 / n))
}

/// `det A` for positive semidefinite `A`, with the same clamping as [`det_root`].
pub fn det_psd(a: &HermitianMatrix, tol: f64) -> Result<f64> {
    Ok(clamped_psd_values(a, tol)?.iter().product())
}

/// Smallest and largest eigenvalue over the two spectra.
pub fn spectral_bounds(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<(f64, f64)> {
    a.as_matrix().ensure_same_dim(b.as_matrix())?;
    let sa = eigh(a)?;
    let sb = eigh(b)?;
    Ok((sa.min().min(sb.min()), sa.max().max(sb.max())))
}

/// Requires `lambda_min(A) > tol * (1 + ||A||)`.
pub fn ensure_positive_definite(a: &HermitianMatrix, tol: f64) -> Result<Spectrum> {
    let s = eigh(a)?;
    let scale = 1.0 + s.max().abs().max(s.min().abs());
    if s.min() <= tol * scale {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: s.min(),
        });
    }
    Ok(s)
}
