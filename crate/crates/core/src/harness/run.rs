use std::time::Instant;

use rayon::prelude::*;

use super::report::{Report, TrialRecord};
use super::{Suite, SuiteSpec};
use crate::error::{Error, Result};
use crate::functions::{concave_suite, convex_suite, FunctionPair, ScalarFunction};
use crate::inequalities::{self as ineq, CheckOutcome};
use crate::linalg::{ComplexMatrix, HermitianMatrix, NormKind};
use crate::means::{mean_catalog, MatrixMean};
use crate::randgen::{
    normalize_for_contraction, random_gap_pair, random_normal, random_pd, stream_seed, GapMode, GeneratorConfig,
    Structure,
};

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

/// One point of the parameter grid a suite sweeps.
#[derive(Debug, Clone)]
struct Config {
    dim: usize,
    function: Option<ScalarFunction>,
    mean: Option<MatrixMean>,
    alpha: Option<f64>,
    r: Option<f64>,
    norms: Vec<NormKind>,
}

fn resolve_functions(names: &[String], default: impl FnOnce() -> Vec<ScalarFunction>) -> Result<Vec<ScalarFunction>> {
    if names.is_empty() {
        return Ok(default());
    }
    names.iter().map(|n| ScalarFunction::by_name(n)).collect()
}

fn resolve_means(names: &[String], default: impl FnOnce() -> Vec<MatrixMean>) -> Result<Vec<MatrixMean>> {
    if names.is_empty() {
        return Ok(default());
    }
    names.iter().map(|n| MatrixMean::by_name(n)).collect()
}

fn by_names(names: &[&str]) -> Vec<ScalarFunction> {
    names
        .iter()
        .map(|n| ScalarFunction::by_name(n).expect("built-in function name"))
        .collect()
}

fn both_suites() -> Vec<ScalarFunction> {
    let mut v = convex_suite();
    v.extend(concave_suite());
    v
}

fn or_default(values: &[f64], default: &[f64]) -> Vec<f64> {
    if values.is_empty() {
        default.to_vec()
    } else {
        values.to_vec()
    }
}

/// Expands the spec into its configuration grid, resolving every name.
fn configurations(spec: &SuiteSpec) -> Result<Vec<Config>> {
    spec.validate()?;
    let dims: Vec<usize> = match &spec.fixture {
        Some([a, _]) => vec![a.n],
        None => spec.dims.clone(),
    };
    let alphas = or_default(&spec.alphas, &[0.25, 0.5, 0.75]);
    let rs = or_default(&spec.rs, &[1.5, 2.0, 3.0]);
    for &r in &rs {
        if !(r >= 1.0) {
            return Err(Error::InvalidInput(format!("r = {r} must be >= 1")));
        }
    }
    for &a in &alphas {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::InvalidInput(format!("alpha = {a} outside [0, 1]")));
        }
    }

    let (functions, means): (Vec<Option<ScalarFunction>>, Vec<Option<MatrixMean>>) = match spec.suite {
        Suite::ChordBounds | Suite::MainChain | Suite::EigProdNorm => (
            resolve_functions(&spec.functions, both_suites)?.into_iter().map(Some).collect(),
            resolve_means(&spec.means, mean_catalog)?.into_iter().map(Some).collect(),
        ),
        Suite::MeanDifferenceNorm => (
            resolve_functions(&spec.functions, convex_suite)?.into_iter().map(Some).collect(),
            resolve_means(&spec.means, mean_catalog)?.into_iter().map(Some).collect(),
        ),
        Suite::InverseFunction => (
            resolve_functions(&spec.functions, || {
                by_names(&["identity", "sqrt", "power:2", "power:3/2", "log1p", "expm1", "mobius"])
            })?
            .into_iter()
            .map(Some)
            .collect(),
            resolve_means(&spec.means, mean_catalog)?.into_iter().map(Some).collect(),
        ),
        Suite::Contraction => (
            resolve_functions(&spec.functions, || by_names(&["power:1/4", "power:1/2", "power:3/4"]))?
                .into_iter()
                .map(Some)
                .collect(),
            resolve_means(&spec.means, || {
                [0.25, 0.5, 0.75]
                    .iter()
                    .map(|&q| MatrixMean::geometric(q).expect("valid weight"))
                    .collect()
            })?
            .into_iter()
            .map(Some)
            .collect(),
        ),
        Suite::Subadditivity => (
            resolve_functions(&spec.functions, convex_suite)?.into_iter().map(Some).collect(),
            vec![None],
        ),
        Suite::NormalChain | Suite::Determinant => (
            resolve_functions(&spec.functions, both_suites)?.into_iter().map(Some).collect(),
            vec![None],
        ),
        _ => (vec![None], vec![None]),
    };
    // Norm names are resolved up front so a bad name is a usage error.
    let norms_for = |dim: usize| -> Result<Vec<NormKind>> {
        if spec.norms.is_empty() {
            return Ok(NormKind::catalog(dim));
        }
        for k in &spec.norms {
            k.of_singular_values(&vec![1.0; dim])?;
        }
        Ok(spec.norms.clone())
    };

    let mut out = Vec::new();
    if spec.suite == Suite::NormalCounterexample {
        out.push(Config {
            dim: 2,
            function: None,
            mean: None,
            alpha: None,
            r: None,
            norms: vec![NormKind::Operator],
        });
        return Ok(out);
    }
    for &dim in &dims {
        let norms = norms_for(dim)?;
        for f in &functions {
            for s in &means {
                let base = Config {
                    dim,
                    function: f.clone(),
                    mean: s.clone(),
                    alpha: None,
                    r: None,
                    norms: norms.clone(),
                };
                match spec.suite {
                    Suite::PowerMean | Suite::AndoHiai => {
                        for &alpha in &alphas {
                            for &r in &rs {
                                out.push(Config {
                                    alpha: Some(alpha),
                                    r: Some(r),
                                    ..base.clone()
                                });
                            }
                        }
                    }
                    Suite::Determinant => {
                        for &alpha in &alphas {
                            if !(alpha > 0.0 && alpha < 1.0) {
                                return Err(Error::InvalidInput(format!(
                                    "determinant weights need 0 < alpha < 1, got {alpha}"
                                )));
                            }
                            out.push(Config {
                                alpha: Some(alpha),
                                ..base.clone()
                            });
                        }
                    }
                    _ => out.push(base),
                }
            }
        }
    }
    Ok(out)
}

/// Errors that mean "this instance is outside the checker's hypotheses".
fn is_hypothesis_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Hypothesis(_)
            | Error::InvalidInterval { .. }
            | Error::InfiniteCoefficient { .. }
            | Error::MissingInverse(_)
            | Error::DomainViolation { .. }
    )
}

enum Instance {
    Hermitian(HermitianMatrix, HermitianMatrix),
    Normal(ComplexMatrix, ComplexMatrix),
    None,
}

fn generate(spec: &SuiteSpec, cfg: &Config, trial: usize, seed: u64) -> Result<Instance> {
    if let Some([a, b]) = &spec.fixture {
        let (a, b) = (a.to_matrix()?, b.to_matrix()?);
        return Ok(if spec.suite.uses_normal_pairs() {
            Instance::Normal(a, b)
        } else {
            Instance::Hermitian(
                HermitianMatrix::try_from_matrix(&a, spec.tol)?,
                HermitianMatrix::try_from_matrix(&b, spec.tol)?,
            )
        });
    }
    let (s0, s1) = (stream_seed(seed, 0), stream_seed(seed, 1));
    Ok(match spec.suite {
        Suite::NormalCounterexample => Instance::None,
        Suite::NormalTriangle | Suite::NormalChain => {
            let g = GeneratorConfig::new(cfg.dim, spec.m, spec.big_m, Structure::NormalComplex, seed)?;
            Instance::Normal(random_normal(&g, s0)?, random_normal(&g, s1)?)
        }
        Suite::Determinant if trial % 3 != 0 => {
            let mode = if trial % 3 == 1 { GapMode::BelowA } else { GapMode::AboveA };
            let (a, b) = random_gap_pair(cfg.dim, mode, seed)?;
            Instance::Hermitian(a, b)
        }
        _ => {
            let g = GeneratorConfig::new(cfg.dim, spec.m, spec.big_m, Structure::PositiveDefinite, seed)?;
            Instance::Hermitian(random_pd(&g, s0)?, random_pd(&g, s1)?)
        }
    })
}

fn dispatch(spec: &SuiteSpec, cfg: &Config, inst: &Instance) -> Result<CheckOutcome> {
    let tol = spec.tol;
    let f = || cfg.function.as_ref().expect("suite configures a function");
    let s = || cfg.mean.as_ref().expect("suite configures a mean");
    let alpha = cfg.alpha.unwrap_or(0.5);
    let r = cfg.r.unwrap_or(1.0);
    match (spec.suite, inst) {
        (Suite::NormalCounterexample, _) => ineq::check_normal_counterexample(),
        (Suite::NormalTriangle, Instance::Normal(a, b)) => ineq::check_normal_triangle(a, b, &cfg.norms, tol),
        (Suite::NormalChain, Instance::Normal(a, b)) => ineq::check_normal_chain(f(), a, b, &cfg.norms, tol),
        (Suite::ChordBounds, Instance::Hermitian(a, b)) => ineq::check_chord_bounds(f(), s(), a, b, tol),
        (Suite::MainChain, Instance::Hermitian(a, b)) => ineq::check_main_chain(f(), s(), a, b, tol),
        (Suite::LogExample, Instance::Hermitian(a, b)) => {
            let (_, big_m) = crate::linalg::spectral_bounds(a, b)?;
            ineq::check_log_example(a, b, big_m.max(0.0), tol)
        }
        (Suite::MeanDifferenceNorm, Instance::Hermitian(a, b)) => {
            ineq::check_mean_difference_norm(f(), s(), a, b, &cfg.norms, tol)
        }
        (Suite::EigProdNorm, Instance::Hermitian(a, b)) => ineq::check_eig_prod_norm(f(), s(), a, b, tol),
        (Suite::Subadditivity, Instance::Hermitian(a, b)) => {
            ineq::check_subadditivity_refinement(f(), a, b, &cfg.norms, tol)
        }
        (Suite::PowerMean, Instance::Hermitian(a, b)) => ineq::check_power_mean_bounds(a, b, alpha, r, tol),
        (Suite::AndoHiai, Instance::Hermitian(a, b)) => ineq::check_ando_hiai_comparison(a, b, alpha, r, tol),
        (Suite::Contraction, Instance::Hermitian(a, b)) => {
            let pair = FunctionPair::new(f().clone(), s().representing_function().clone());
            let sigma = pair.mean()?;
            let (a, b) = if spec.fixture.is_some() {
                (a.clone(), b.clone())
            } else {
                normalize_for_contraction(&sigma, a, b)?
            };
            ineq::check_contraction_implication(&pair, &a, &b, spec.iters, tol)
        }
        (Suite::InverseFunction, Instance::Hermitian(a, b)) => ineq::check_inverse_function(f(), s(), a, b, tol),
        (Suite::Determinant, Instance::Hermitian(a, b)) => ineq::check_determinant_suite(f(), a, b, alpha, tol),
        (suite, _) => Err(Error::InvalidInput(format!("suite {suite} received the wrong instance kind"))),
    }
}

fn run_trial(spec: &SuiteSpec, cfg_index: usize, cfg: &Config, trial: usize) -> TrialRecord {
    let seed = stream_seed(stream_seed(spec.master_seed, cfg_index as u64), trial as u64);
    let result = generate(spec, cfg, trial, seed).and_then(|inst| dispatch(spec, cfg, &inst));
    let (mut outcome, error) = match result {
        Ok(o) => (o, None),
        Err(e) => {
            let mut o = CheckOutcome::new(spec.suite.name(), "");
            if is_hypothesis_error(&e) {
                o.not_applicable = Some(e.to_string());
                (o, None)
            } else {
                (o, Some(e.to_string()))
            }
        }
    };
    outcome.param("dim", cfg.dim).param("seed", seed);
    if let Some(f) = &cfg.function {
        outcome.params.entry("function".into()).or_insert_with(|| f.name().to_string());
    }
    if let Some(s) = &cfg.mean {
        outcome.params.entry("mean".into()).or_insert_with(|| s.name().to_string());
    }
    if let Some(a) = cfg.alpha {
        outcome.param("alpha", a);
    }
    if let Some(r) = cfg.r {
        outcome.param("r", r);
    }
    TrialRecord {
        config: cfg_index,
        trial,
        seed,
        outcome,
        error,
    }
}

/// Runs every configuration for `spec.trials` seeded trials (one trial for a
/// fixture or the fixed normal counterexample). Names are resolved before
/// any trial runs; the records are ordered by `(config, trial)` whatever the
/// worker count.
pub fn run_suite(spec: &SuiteSpec, options: RunOptions) -> Result<Report> {
    let start = Instant::now();
    let configs = configurations(spec)?;
    let trials = if spec.fixture.is_some() || spec.suite == Suite::NormalCounterexample {
        1
    } else {
        spec.trials
    };
    let jobs: Vec<(usize, usize)> = (0..configs.len())
        .flat_map(|c| (0..trials).map(move |t| (c, t)))
        .collect();
    let work = || -> Vec<TrialRecord> {
        jobs.par_iter()
            .map(|&(c, t)| run_trial(spec, c, &configs[c], t))
            .collect()
    };
    let records = match options.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    Ok(Report::new(spec.clone(), records, start.elapsed().as_secs_f64()))
}
