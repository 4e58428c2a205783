//! Dense Hermitian/normal matrix kernels.

mod calculus;
mod eigh;
pub mod io;
mod loewner;
mod matrix;
mod norm;

pub use calculus::{
    apply_fn, apply_fn_spectrum, det_psd, det_root, ensure_positive_definite, matrix_abs, spectral_bounds,
};
pub use eigh::{eigh, Spectrum};
pub use loewner::{loewner_leq, ComparisonResult, DEFAULT_TOL};
pub use matrix::{ComplexMatrix, HermitianMatrix};
pub use norm::{norm, operator_norm, singular_values, NormKind};
