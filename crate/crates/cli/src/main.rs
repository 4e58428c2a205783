//! `matineq`: run inequality suites over seeded random instances, or search
//! for counterexamples outside a checker's hypotheses.
//!
//! Exit status: 0 when every applicable link passed (or, for `search`, a
//! counterexample was found), 1 on a failed link (or an empty search), 2 on a
//! usage or configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use matineq::harness::{
    emit_report, run_suite, search_counterexample, ReportFormat, RunOptions, SearchSpec, SearchTarget, Suite,
    SuiteSpec, DEFAULT_SEED,
};
use matineq::linalg::io::{read_matrix, MatrixFile};
use matineq::linalg::{NormKind, DEFAULT_TOL};
use matineq::randgen::PhaseMode;

#[derive(Parser)]
#[command(name = "matineq", version, about = "Numerical verification of matrix mean inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a checker suite over seeded trials.
    Run(RunArgs),
    /// Search for a violating instance of a chain outside its hypotheses.
    Search(SearchArgs),
    /// List suites, functions, means and norms.
    List,
}

#[derive(Args)]
struct CommonArgs {
    /// Matrix dimension (repeatable).
    #[arg(long = "dim")]
    dims: Vec<usize>,
    /// Lower end of the spectral interval.
    #[arg(long, default_value_t = 0.5)]
    m: f64,
    /// Upper end of the spectral interval.
    #[arg(long = "M", default_value_t = 4.0)]
    big_m: f64,
    /// Norm: operator, trace, frobenius, schatten:p, kyfan:k (repeatable).
    #[arg(long = "norm")]
    norms: Vec<NormKind>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Matrix files for `A` and `B` (give twice).
    #[arg(long = "fixture", num_args = 1)]
    fixture: Vec<PathBuf>,
    /// Where to write the report.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Function name (repeatable), e.g. power:3/2, log1p, sqrt.
    #[arg(long = "fn")]
    functions: Vec<String>,
    /// Mean name (repeatable), e.g. geometric:1/2.
    #[arg(long = "mean")]
    means: Vec<String>,
    /// Weight of the geometric mean or determinant combination (repeatable).
    #[arg(long = "alpha")]
    alphas: Vec<f64>,
    /// Exponent r >= 1 for the power suites (repeatable).
    #[arg(long = "r")]
    rs: Vec<f64>,
    /// Number of compositions for the contraction suite.
    #[arg(long, default_value_t = 3)]
    iters: usize,
    #[arg(long, default_value = "json")]
    format: ReportFormat,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SearchArgs {
    /// eig_prod_norm (normal pairs) or main_chain (positive definite pairs).
    #[arg(long)]
    target: SearchTarget,
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    /// uniform or real (phases in {0, pi}).
    #[arg(long, default_value = "uniform")]
    phases: String,
    #[arg(long = "fn", default_value = "power:2")]
    function: String,
    #[arg(long = "mean", default_value = "arithmetic:1/2")]
    mean: String,
    #[command(flatten)]
    common: CommonArgs,
}

/// `println!` that ignores a closed stdout (e.g. piped into `head`).
#[cfg(not(test))]
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

#[cfg(test)]
macro_rules! out {
    ($($t:tt)*) => {
        println!($($t)*)
    };
}

const OK: u8 = 0;
const FAILED: u8 = 1;
const USAGE: u8 = 2;

fn usage(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    USAGE
}

fn load_fixture(paths: &[PathBuf]) -> Result<Option<[MatrixFile; 2]>, String> {
    match paths {
        [] => Ok(None),
        [a, b] => {
            let a = read_matrix(a).map_err(|e| e.to_string())?;
            let b = read_matrix(b).map_err(|e| e.to_string())?;
            if a.dim() != b.dim() {
                return Err(format!("fixture dimensions differ: {} vs {}", a.dim(), b.dim()));
            }
            Ok(Some([MatrixFile::from_matrix(&a), MatrixFile::from_matrix(&b)]))
        }
        _ => Err("--fixture must be given exactly twice (A then B)".into()),
    }
}

fn run(args: RunArgs) -> u8 {
    let suite: Suite = match args.suite.parse() {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let fixture = match load_fixture(&args.common.fixture) {
        Ok(f) => f,
        Err(e) => return usage(e),
    };
    let mut spec = SuiteSpec::new(suite);
    spec.trials = args.trials;
    if !args.common.dims.is_empty() {
        spec.dims = args.common.dims;
    }
    spec.m = args.common.m;
    spec.big_m = args.common.big_m;
    spec.functions = args.functions;
    spec.means = args.means;
    spec.norms = args.common.norms;
    spec.alphas = args.alphas;
    spec.rs = args.rs;
    spec.iters = args.iters;
    spec.tol = args.common.tol;
    spec.master_seed = args.common.seed;
    spec.fixture = fixture;

    let report = match run_suite(&spec, RunOptions { jobs: args.jobs }) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    if let Some(path) = &args.common.report {
        if let Err(e) = emit_report(&report, args.format, path) {
            eprintln!("error: {e}");
            return USAGE;
        }
    }
    let s = &report.summary;
    out!(
        "suite {}: {} records, {} links ({} checked, {} failed, {} vacuous, {} not applicable), {} records not applicable, {} errors",
        suite,
        s.records,
        s.total_links,
        s.checked_links,
        s.failed_links,
        s.vacuous_links,
        s.not_applicable_links,
        s.not_applicable_records,
        s.errored_records
    );
    for r in report.failures().take(5) {
        let worst = r
            .outcome
            .links
            .iter()
            .filter(|l| l.is_failure())
            .min_by(|x, y| x.margin.total_cmp(&y.margin));
        match (&r.error, worst) {
            (Some(e), _) => out!("  config {} trial {}: error: {e}", r.config, r.trial),
            (None, Some(l)) => out!(
                "  config {} trial {}: {} (margin {:e}, scale {:e})",
                r.config, r.trial, l.description, l.margin, l.scale
            ),
            (None, None) => {}
        }
    }
    if report.success() {
        OK
    } else {
        FAILED
    }
}

fn search(args: SearchArgs) -> u8 {
    let phases = match args.phases.as_str() {
        "uniform" => PhaseMode::Uniform,
        "real" => PhaseMode::Real,
        other => return usage(format!("unknown phase mode `{other}`")),
    };
    let fixture = match load_fixture(&args.common.fixture) {
        Ok(f) => f,
        Err(e) => return usage(e),
    };
    let mut spec = SearchSpec::new(args.target);
    spec.budget = args.budget;
    if !args.common.dims.is_empty() {
        spec.dims = args.common.dims;
    }
    spec.m = args.common.m;
    spec.big_m = args.common.big_m;
    spec.function = args.function;
    spec.mean = args.mean;
    if !args.common.norms.is_empty() {
        spec.norms = args.common.norms;
    }
    spec.phases = phases;
    spec.tol = args.common.tol;
    spec.master_seed = args.common.seed;
    spec.fixture = fixture;

    let report = match search_counterexample(&spec) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    if let Some(path) = &args.common.report {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: {}: {e}", path.display());
            return USAGE;
        }
    }
    match &report.found {
        Some(c) => {
            out!(
                "counterexample for {} at candidate {} (seed {}) after {} evaluations",
                spec.target, c.candidate, c.seed, report.evaluated
            );
            for l in c.outcome.links.iter().filter(|l| l.is_failure()) {
                out!("  {} (margin {:e})", l.description, l.margin);
            }
            OK
        }
        None => {
            out!(
                "no counterexample for {} in {} candidates ({} skipped)",
                spec.target, report.evaluated, report.skipped
            );
            FAILED
        }
    }
}

fn list() -> u8 {
    out!("suites:");
    for s in Suite::ALL {
        out!("  {s}");
    }
    out!("functions:");
    for f in matineq::functions::function_catalog() {
        out!("  {}", f.name());
    }
    out!("means:");
    for m in matineq::means::mean_catalog() {
        out!("  {}", m.name());
    }
    out!("norms:\n  operator\n  trace\n  frobenius\n  schatten:<p>\n  kyfan:<k>");
    OK
}

fn execute(cli: Cli) -> u8 {
    match cli.command {
        Command::Run(args) => run(args),
        Command::Search(args) => search(args),
        Command::List => list(),
    }
}

fn main() -> ExitCode {
    ExitCode::from(execute(Cli::parse()))
}
