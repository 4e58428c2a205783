//! Unitarily invariant norms through singular values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::eigh::eigh;
use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// The catalog of unitarily invariant norms.
///
/// `Trace` is `Schatten(1)` and `KyFan(n)`, `Frobenius` is `Schatten(2)`,
/// `Operator` is `KyFan(1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    Operator,
    Schatten(f64),
    KyFan(usize),
    Trace,
    Frobenius,
}

impl NormKind {
    /// Operator, trace, Frobenius, Schatten-3 and every Ky Fan norm for dimension `n`.
    pub fn catalog(n: usize) -> Vec<NormKind> {
        let mut v = vec![
            NormKind::Operator,
            NormKind::Trace,
            NormKind::Frobenius,
            NormKind::Schatten(3.0),
        ];
        v.extend((1..=n).map(NormKind::KyFan));
        v
    }

    /// Evaluates the norm on a decreasing vector of singular values.
    pub fn of_singular_values(&self, sv: &[f64]) -> Result<f64> {
        let n = sv.len();
        Ok(match *self {
            NormKind::Operator => sv.first().copied().unwrap_or(0.0),
            NormKind::Trace => sv.iter().sum(),
            NormKind::Frobenius => sv.iter().map(|s| s * s).sum::<f64>().sqrt(),
            NormKind::KyFan(k) => {
                if k == 0 || k > n {
                    return Err(Error::InvalidNorm(format!("Ky Fan index {k} outside 1..{n}")));
                }
                sv[..k].iter().sum()
            }
            NormKind::Schatten(p) => {
                if !(p >= 1.0) || !p.is_finite() {
                    return Err(Error::InvalidNorm(format!("Schatten exponent {p} must be >= 1")));
                }
                let top = sv.first().copied().unwrap_or(0.0);
                if top == 0.0 {
                    0.0
                } else {
                    // Scaling by the top value avoids overflow for large p.
                    top * sv.iter().map(|s| (s / top).powf(p)).sum::<f64>().powf(1.0 / p)
                }
            }
        })
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::Operator => write!(f, "operator"),
            NormKind::Schatten(p) => write!(f, "schatten:{p}"),
            NormKind::KyFan(k) => write!(f, "kyfan:{k}"),
            NormKind::Trace => write!(f, "trace"),
            NormKind::Frobenius => write!(f, "frobenius"),
        }
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownName {
            kind: "norm",
            name: s.to_string(),
        };
        match s {
            "operator" | "op" => return Ok(NormKind::Operator),
            "trace" => return Ok(NormKind::Trace),
            "frobenius" => return Ok(NormKind::Frobenius),
            _ => {}
        }
        let (head, arg) = s.split_once(':').ok_or_else(unknown)?;
        match head {
            "schatten" => {
                let p: f64 = arg.parse().map_err(|_| unknown())?;
                if !(p >= 1.0) || !p.is_finite() {
                    return Err(Error::InvalidNorm(format!("Schatten exponent {p} must be >= 1")));
                }
                Ok(NormKind::Schatten(p))
            }
            "kyfan" => {
                let k: usize = arg.parse().map_err(|_| unknown())?;
                if k == 0 {
                    return Err(Error::InvalidNorm("Ky Fan index must be >= 1".into()));
                }
                Ok(NormKind::KyFan(k))
            }
            _ => Err(unknown()),
        }
    }
}

impl Serialize for NormKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for NormKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Singular values in decreasing order.
///
/// Hermitian input uses `|lambda|` directly; anything else goes through the
/// eigenvalues of `|A| = (A*A)^{1/2}`.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let mut sv: Vec<f64> = if a.is_exactly_hermitian() {
        eigh(&HermitianMatrix::from_matrix(a))?
            .values
            .into_iter()
            .map(f64::abs)
            .collect()
    } else {
        let gram = HermitianMatrix::from_matrix(&(&a.adjoint() * a));
        eigh(&gram)?
            .values
            .into_iter()
            .map(|x| x.max(0.0).sqrt())
            .collect()
    };
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

pub fn norm(a: &ComplexMatrix, kind: NormKind) -> Result<f64> {
    kind.of_singular_values(&singular_values(a)?)
}

/// Largest absolute eigenvalue of a Hermitian matrix.
pub fn operator_norm(a: &HermitianMatrix) -> Result<f64> {
    let s = eigh(a)?;
    Ok(s.max().abs().max(s.min().abs()))
}
