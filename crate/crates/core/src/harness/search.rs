use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{DEFAULT_SEED, TOOL_VERSION};
use crate::error::{Error, Result};
use crate::functions::ScalarFunction;
use crate::inequalities::{check_main_chain, check_normal_upper_chain, CheckOutcome};
use crate::linalg::io::MatrixFile;
use crate::linalg::{ComplexMatrix, HermitianMatrix, NormKind, DEFAULT_TOL};
use crate::means::MatrixMean;
use crate::randgen::{random_normal_with_phases, random_pd, stream_seed, GeneratorConfig, PhaseMode, Structure};

/// Which chain the search evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchTarget {
    /// The upper norm chain of the eigenvalue/product/norm family, on normal pairs.
    EigProdNorm,
    /// Both main chains, on positive definite pairs (where they hold).
    MainChain,
}

impl SearchTarget {
    pub fn name(self) -> &'static str {
        match self {
            SearchTarget::EigProdNorm => "eig_prod_norm",
            SearchTarget::MainChain => "main_chain",
        }
    }
}

impl fmt::Display for SearchTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SearchTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eig_prod_norm" => Ok(SearchTarget::EigProdNorm),
            "main_chain" => Ok(SearchTarget::MainChain),
            _ => Err(Error::UnknownName {
                kind: "search target",
                name: s.to_string(),
            }),
        }
    }
}

impl Serialize for SearchTarget {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for SearchTarget {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub target: SearchTarget,
    pub budget: usize,
    pub dims: Vec<usize>,
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub function: String,
    pub mean: String,
    pub norms: Vec<NormKind>,
    pub phases: PhaseMode,
    pub tol: f64,
    pub master_seed: u64,
    /// Evaluated as candidate 0 before any random candidate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<[MatrixFile; 2]>,
}

impl SearchSpec {
    pub fn new(target: SearchTarget) -> Self {
        Self {
            target,
            budget: 10_000,
            dims: (2..=6).collect(),
            m: 0.5,
            big_m: 4.0,
            function: "power:2".into(),
            mean: "arithmetic:1/2".into(),
            norms: vec![NormKind::Operator],
            phases: PhaseMode::Uniform,
            tol: DEFAULT_TOL,
            master_seed: DEFAULT_SEED,
            fixture: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub candidate: usize,
    pub seed: u64,
    pub a: MatrixFile,
    pub b: MatrixFile,
    pub outcome: CheckOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub tool_version: String,
    pub spec: SearchSpec,
    pub evaluated: usize,
    /// Candidates outside the checker's hypotheses or numerically rejected.
    pub skipped: usize,
    pub found: Option<Counterexample>,
    pub wall_time_seconds: f64,
}

impl SearchReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        s.push('\n');
        s
    }
}

fn candidate(spec: &SearchSpec, index: usize, seed: u64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if index == 0 {
        if let Some([a, b]) = &spec.fixture {
            return Ok((a.to_matrix()?, b.to_matrix()?));
        }
    }
    let dim = spec.dims[index % spec.dims.len()];
    let (s0, s1) = (stream_seed(seed, 0), stream_seed(seed, 1));
    match spec.target {
        SearchTarget::EigProdNorm => {
            let g = GeneratorConfig::new(dim, spec.m, spec.big_m, Structure::NormalComplex, seed)?;
            Ok((
                random_normal_with_phases(&g, s0, spec.phases)?,
                random_normal_with_phases(&g, s1, spec.phases)?,
            ))
        }
        SearchTarget::MainChain => {
            let g = GeneratorConfig::new(dim, spec.m, spec.big_m, Structure::PositiveDefinite, seed)?;
            Ok((random_pd(&g, s0)?.into_matrix(), random_pd(&g, s1)?.into_matrix()))
        }
    }
}

/// Streams candidates until a checked link fails or the budget is spent.
pub fn search_counterexample(spec: &SearchSpec) -> Result<SearchReport> {
    let start = Instant::now();
    if spec.budget == 0 {
        return Err(Error::InvalidInput("budget must be at least 1".into()));
    }
    if spec.dims.is_empty() || spec.dims.contains(&0) {
        return Err(Error::InvalidInput("dimensions must be positive".into()));
    }
    let f = ScalarFunction::by_name(&spec.function)?;
    let sigma = MatrixMean::by_name(&spec.mean)?;
    let mut skipped = 0;
    let mut found = None;
    let mut evaluated = 0;
    for i in 0..spec.budget {
        evaluated += 1;
        let seed = stream_seed(spec.master_seed, i as u64);
        let (a, b) = candidate(spec, i, seed)?;
        let outcome = match spec.target {
            SearchTarget::EigProdNorm => check_normal_upper_chain(&f, &a, &b, &spec.norms, spec.tol),
            SearchTarget::MainChain => {
                let ha = HermitianMatrix::try_from_matrix(&a, spec.tol)?;
                let hb = HermitianMatrix::try_from_matrix(&b, spec.tol)?;
                check_main_chain(&f, &sigma, &ha, &hb, spec.tol)
            }
        };
        match outcome {
            Ok(o) if !o.pass() => {
                found = Some(Counterexample {
                    candidate: i,
                    seed,
                    a: MatrixFile::from_matrix(&a),
                    b: MatrixFile::from_matrix(&b),
                    outcome: o,
                });
                break;
            }
            Ok(_) => {}
            Err(_) => skipped += 1,
        }
    }
    Ok(SearchReport {
        tool_version: TOOL_VERSION.to_string(),
        spec: spec.clone(),
        evaluated,
        skipped,
        found,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}
