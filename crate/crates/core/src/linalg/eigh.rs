//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Each rotation first removes the phase of the pivot `a[p][q]` with a
//! diagonal unitary and then applies a real Jacobi rotation to the resulting
//! real symmetric 2x2 block. Jacobi converges unconditionally on Hermitian
//! input and yields eigenvalues with small relative error, which matters
//! here because every Loewner margin is an eigenvalue of a difference.
//!
//! Output conventions, fixed so that repeated runs are reproducible:
//! * eigenvalues are sorted in decreasing order;
//! * every eigenvector is scaled so its first component with modulus above
//!   `1e-12` is real and positive;
//! * within a cluster of equal eigenvalues, vectors are ordered
//!   lexicographically (descending) on their components rounded to 1e-9.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Eigenvalues (decreasing) and the unitary whose columns are the eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `U diag(g(lambda)) U*`, re-symmetrized.
    pub fn map(&self, g: impl Fn(f64) -> f64) -> HermitianMatrix {
        let mapped: Vec<f64> = self.values.iter().map(|&x| g(x)).collect();
        self.rebuild(&mapped)
    }

    /// `U diag(values) U*` for an arbitrary real diagonal, re-symmetrized.
    pub fn rebuild(&self, values: &[f64]) -> HermitianMatrix {
        let n = self.dim();
        let u = &self.vectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &v) in values.iter().enumerate() {
                    if v != 0.0 {
                        acc += u[(i, k)] * u[(j, k)].conj() * v;
                    }
                }
                out[(i, j)] = acc;
            }
        }
        for i in 0..n {
            out[(i, i)] = Complex64::new(out[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                out[(j, i)] = out[(i, j)].conj();
            }
        }
        HermitianMatrix::from_matrix(&out)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.rebuild(&self.values)
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn eigh(a: &HermitianMatrix) -> Result<Spectrum> {
    let n = a.dim();
    let mut w = a.as_matrix().clone();
    if !w.is_finite() {
        return Err(Error::InvalidInput("eigh input has non-finite entries".into()));
    }
    let mut v = ComplexMatrix::identity(n);
    let frob = w.frobenius();
    let cap = 64 * n * n;

    if n > 1 && frob > 0.0 {
        let target = f64::EPSILON * frob;
        let mut sweeps = 0;
        loop {
            let off = off_diagonal_norm(&w);
            if off <= target {
                break;
            }
            if sweeps >= cap {
                return Err(Error::NonConvergence { norm: frob, sweeps });
            }
            sweeps += 1;
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    rotate(&mut w, &mut v, p, q, target);
                }
            }
        }
    }

    let raw: Vec<f64> = (0..n).map(|i| w[(i, i)].re).collect();
    normalize_phases(&mut v);
    Ok(sorted_spectrum(raw, v))
}

fn off_diagonal_norm(w: &ComplexMatrix) -> f64 {
    let n = w.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += w[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(w: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, target: f64) {
    let apq = w[(p, q)];
    let mag = apq.norm();
    // Pivots this small cannot move the off-diagonal norm past the target.
    if mag <= target * 1e-3 || mag == 0.0 {
        return;
    }
    let n = w.dim();
    let app = w[(p, p)].re;
    let aqq = w[(q, q)].re;
    let phase = apq / mag; // e^{i phi}
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let ph_conj = phase.conj(); // e^{-i phi}

    // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] acting on columns p, q:
    // G_pp = c, G_qp = -s e^{-i phi}, G_pq = s, G_qq = c e^{-i phi}.
    let g_qp = -ph_conj * s;
    let g_qq = ph_conj * c;

    // W <- W G
    for k in 0..n {
        let wkp = w[(k, p)];
        let wkq = w[(k, q)];
        w[(k, p)] = wkp * c + wkq * g_qp;
        w[(k, q)] = wkp * s + wkq * g_qq;
    }
    // W <- G* W
    for k in 0..n {
        let wpk = w[(p, k)];
        let wqk = w[(q, k)];
        w[(p, k)] = wpk * c + wqk * g_qp.conj();
        w[(q, k)] = wpk * s + wqk * g_qq.conj();
    }
    w[(p, q)] = Complex64::new(0.0, 0.0);
    w[(q, p)] = Complex64::new(0.0, 0.0);
    w[(p, p)] = Complex64::new(w[(p, p)].re, 0.0);
    w[(q, q)] = Complex64::new(w[(q, q)].re, 0.0);

    // V <- V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * g_qp;
        v[(k, q)] = vkp * s + vkq * g_qq;
    }
}

fn normalize_phases(v: &mut ComplexMatrix) {
    let n = v.dim();
    for col in 0..n {
        let lead = (0..n).map(|r| v[(r, col)]).find(|z| z.norm() > 1e-12);
        if let Some(z) = lead {
            let factor = z.conj() / z.norm();
            for r in 0..n {
                v[(r, col)] *= factor;
            }
            // The leading component is now real; drop the rounding residue.
            if let Some(r) = (0..n).find(|&r| v[(r, col)].norm() > 1e-12) {
                v[(r, col)] = Complex64::new(v[(r, col)].norm(), 0.0);
            }
        }
    }
}

fn rounded_key(v: &ComplexMatrix, col: usize) -> Vec<i64> {
    (0..v.dim())
        .flat_map(|r| {
            let z = v[(r, col)];
            [(z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64]
        })
        .collect()
}

fn sorted_spectrum(raw: Vec<f64>, v: ComplexMatrix) -> Spectrum {
    let n = raw.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[j].partial_cmp(&raw[i]).unwrap_or(Ordering::Equal));

    // Deterministic order inside numerically degenerate clusters.
    let scale = raw.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let cluster_tol = 1e-12 * (1.0 + scale);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && raw[order[end - 1]] - raw[order[end]] <= cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            order[start..end].sort_by(|&i, &j| rounded_key(&v, j).cmp(&rounded_key(&v, i)));
        }
        start = end;
    }

    let values = order.iter().map(|&i| raw[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Spectrum { values, vectors }
}
