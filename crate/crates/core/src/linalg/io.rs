//! JSON matrix files: `{ "n": int, "entries": [[[re, im], ...], ...] }`, row-major.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Serializable form of a matrix file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        Self {
            n,
            entries: (0..n)
                .map(|i| (0..n).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.entries.len() != self.n {
            return Err(Error::Parse(format!(
                "declared n = {} but found {} rows",
                self.n,
                self.entries.len()
            )));
        }
        let rows = self
            .entries
            .iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        ComplexMatrix::from_rows(rows)
    }
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    serde_json::from_str::<MatrixFile>(text)?.to_matrix()
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(m)).expect("matrix serialization cannot fail")
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    matrix_from_json(&text)
}

/// Reads a matrix that must be Hermitian to `tol`, then symmetrizes it.
pub fn read_hermitian(path: &Path, tol: f64) -> Result<HermitianMatrix> {
    HermitianMatrix::try_from_matrix(&read_matrix(path)?, tol)
}
