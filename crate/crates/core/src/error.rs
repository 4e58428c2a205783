use thiserror::Error;

/// Errors raised by the numerical kernels, the checkers and the harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("eigensolver did not converge after {sweeps} sweeps (matrix norm {norm:e})")]
    NonConvergence { norm: f64, sweeps: usize },

    #[error("value {value} lies outside the domain {domain} of `{function}`{}", depth_suffix(*.depth))]
    DomainViolation {
        function: String,
        value: f64,
        domain: String,
        depth: Option<usize>,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not normal (commutator norm {defect:e})")]
    NotNormal { defect: f64 },

    #[error("matrix is not Hermitian (asymmetry {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    #[error("invalid interval [{lo}, {hi}]: {reason}")]
    InvalidInterval { lo: f64, hi: f64, reason: String },

    #[error("infinite coefficient {name} in a link that requires a finite value")]
    InfiniteCoefficient { name: String },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("function `{0}` has no registered inverse")]
    MissingInverse(String),

    #[error("invalid mean `{name}`: {reason}")]
    InvalidMean { name: String, reason: String },

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn depth_suffix(depth: Option<usize>) -> String {
    match depth {
        Some(d) => format!(" at composition depth {d}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
