//! Seeded suite runner, report assembly and the counterexample search.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::io::MatrixFile;
use crate::linalg::{NormKind, DEFAULT_TOL};

mod report;
mod run;
mod search;

pub use report::{emit_report, ReportFormat, Report, Summary, TrialRecord};
pub use run::{run_suite, RunOptions};
pub use search::{search_counterexample, Counterexample, SearchReport, SearchSpec, SearchTarget};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_SEED: u64 = 20240001;

/// Checker families runnable as suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    ChordBounds,
    MainChain,
    LogExample,
    MeanDifferenceNorm,
    EigProdNorm,
    Subadditivity,
    NormalCounterexample,
    NormalTriangle,
    NormalChain,
    PowerMean,
    AndoHiai,
    Contraction,
    InverseFunction,
    Determinant,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::ChordBounds,
        Suite::MainChain,
        Suite::LogExample,
        Suite::MeanDifferenceNorm,
        Suite::EigProdNorm,
        Suite::Subadditivity,
        Suite::NormalCounterexample,
        Suite::NormalTriangle,
        Suite::NormalChain,
        Suite::PowerMean,
        Suite::AndoHiai,
        Suite::Contraction,
        Suite::InverseFunction,
        Suite::Determinant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ChordBounds => "chord_bounds",
            Suite::MainChain => "main_chain",
            Suite::LogExample => "log_example",
            Suite::MeanDifferenceNorm => "mean_difference_norm",
            Suite::EigProdNorm => "eig_prod_norm",
            Suite::Subadditivity => "subadditivity",
            Suite::NormalCounterexample => "normal_counterexample",
            Suite::NormalTriangle => "normal_triangle",
            Suite::NormalChain => "normal_chain",
            Suite::PowerMean => "power_mean",
            Suite::AndoHiai => "ando_hiai",
            Suite::Contraction => "contraction",
            Suite::InverseFunction => "inverse_function",
            Suite::Determinant => "determinant",
        }
    }

    /// Whether instances are normal (complex) rather than positive definite.
    pub fn uses_normal_pairs(self) -> bool {
        matches!(
            self,
            Suite::NormalCounterexample | Suite::NormalTriangle | Suite::NormalChain
        )
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "suite",
                name: s.to_string(),
            })
    }
}

impl Serialize for Suite {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Suite {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Everything that determines a suite run. Empty name lists select the
/// suite's default catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSpec {
    pub suite: Suite,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub functions: Vec<String>,
    pub means: Vec<String>,
    pub norms: Vec<NormKind>,
    pub alphas: Vec<f64>,
    pub rs: Vec<f64>,
    pub iters: usize,
    pub tol: f64,
    pub master_seed: u64,
    /// A single explicit instance `(A, B)` replacing the random trials.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<[MatrixFile; 2]>,
}

impl SuiteSpec {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            trials: 200,
            dims: (2..=6).collect(),
            m: 0.5,
            big_m: 4.0,
            functions: Vec::new(),
            means: Vec::new(),
            norms: Vec::new(),
            alphas: Vec::new(),
            rs: Vec::new(),
            iters: 3,
            tol: DEFAULT_TOL,
            master_seed: DEFAULT_SEED,
            fixture: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return bad("dimensions must be a nonempty list of positive integers".into());
        }
        if !(self.m > 0.0 && self.m <= self.big_m && self.big_m.is_finite()) {
            return bad(format!("need 0 < m <= M, got m = {}, M = {}", self.m, self.big_m));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(format!("tolerance must be positive, got {}", self.tol));
        }
        if self.iters == 0 {
            return bad("iters must be at least 1".into());
        }
        Ok(())
    }
}
