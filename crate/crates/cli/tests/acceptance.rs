//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Runs as a plain binary (`harness = false`) so the lines appear in order.

use std::process::{Command, ExitCode};
use std::time::Instant;

use matineq::functions::{
    check_pair_conditions, default_pair_grid, function_catalog, log_spaced, FunctionPair, ScalarFunction,
};
use matineq::harness::{run_suite, Report, RunOptions, Suite, SuiteSpec};
use matineq::inequalities::{
    check_ando_hiai_comparison, check_chord_bounds, check_contraction_implication, check_determinant_suite,
    check_inverse_function, check_log_example, check_main_chain, check_normal_counterexample,
    check_power_mean_bounds, CheckOutcome, LinkStatus,
};
use matineq::linalg::{eigh, ComplexMatrix, HermitianMatrix, DEFAULT_TOL};
use matineq::means::MatrixMean;
use matineq::randgen::{random_gap_pair, GapMode, SplitMix64};

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(spec: &SuiteSpec) -> Result<Report, String> {
    run_suite(spec, RunOptions::default()).map_err(|e| format!("{}: {e}", spec.suite))
}

fn clean(report: &Report) -> Result<(), String> {
    let s = &report.summary;
    ensure(s.failed_links == 0 && s.errored_records == 0, || {
        let first = report
            .failures()
            .next()
            .map(|r| format!("{:?}", r.outcome.links.iter().find(|l| l.is_failure())))
            .unwrap_or_default();
        format!(
            "{}: {} failed links, {} errored records; first {first}",
            report.spec.suite, s.failed_links, s.errored_records
        )
    })?;
    ensure(s.checked_links > 0, || format!("{}: nothing checked", report.spec.suite))
}

// ---------------------------------------------------------------- criterion 1

fn fixture() -> Verdict {
    let start = Instant::now();
    let out = check_normal_counterexample().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    let expected = [
        ("||f(|A|)+f(|B|)||", 8.0),
        ("||f(|A|+|B|)||", 16.0),
        ("(f(M)/M)||A+B||", 0.0),
        ("f'(M)||A+B||", 0.0),
        ("M", 2.0),
    ];
    for (key, want) in expected {
        let got = *out.values.get(key).ok_or_else(|| format!("missing value {key}"))?;
        ensure((got - want).abs() <= 1e-10, || format!("{key} = {got}, want {want}"))?;
    }
    ensure(out.pass(), || "counterexample links did not register".into())?;
    ensure(elapsed < 1.0, || format!("took {elapsed:.3}s"))?;
    Ok(format!("values exact, {elapsed:.4}s"))
}

// ---------------------------------------------------------------- criteria 2-7

fn main_chain_suite() -> Verdict {
    let start = Instant::now();
    let report = run(&SuiteSpec::new(Suite::MainChain))?;
    clean(&report)?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 300.0, || format!("took {secs:.1}s"))?;
    Ok(format!(
        "{} records, {} checked links, {secs:.1}s",
        report.summary.records, report.summary.checked_links
    ))
}

fn norm_chain_suites() -> Verdict {
    let mut checked = 0;
    for suite in [Suite::MeanDifferenceNorm, Suite::EigProdNorm] {
        let report = run(&SuiteSpec::new(suite))?;
        clean(&report)?;
        checked += report.summary.checked_links;
    }
    Ok(format!("{checked} checked links"))
}

fn normal_suite() -> Verdict {
    let mut spec = SuiteSpec::new(Suite::NormalChain);
    spec.m = 1.0;
    spec.big_m = 3.0;
    spec.trials = 100;
    let report = run(&spec)?;
    clean(&report)?;
    Ok(format!(
        "{} pairs per function, {} checked links",
        spec.trials * spec.dims.len(),
        report.summary.checked_links
    ))
}

fn determinant_suite() -> Verdict {
    let mut spec = SuiteSpec::new(Suite::Determinant);
    spec.trials = 500;
    spec.functions = vec!["power:2".into(), "sqrt".into()];
    spec.alphas = vec![0.5];
    let report = run(&spec)?;
    clean(&report)?;
    // Link 1 is the gap lemma, link 4 the reverse bound.
    for (idx, label) in [(1, "gap lemma"), (4, "reverse bound")] {
        let n = report
            .records
            .iter()
            .filter_map(|r| r.outcome.links.get(idx))
            .filter(|l| l.status == LinkStatus::Checked)
            .count();
        ensure(n > 0, || format!("{label} never checked"))?;
    }

    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let (a, _) = random_gap_pair(2 + (seed as usize % 5), GapMode::AboveA, seed).map_err(|e| e.to_string())?;
        let f = ScalarFunction::by_name("power:2").unwrap();
        let out = check_determinant_suite(&f, &a, &a, 0.5, DEFAULT_TOL).map_err(|e| e.to_string())?;
        worst = worst.max(out.links[0].margin.abs());
    }
    ensure(worst <= 1e-10, || format!("Minkowski at A = B off by {worst:e}"))?;
    Ok(format!(
        "{} checked links, Minkowski equality defect {worst:.1e}",
        report.summary.checked_links
    ))
}

fn ando_hiai_suite() -> Verdict {
    let report = run(&SuiteSpec::new(Suite::AndoHiai))?;
    clean(&report)?;
    ensure(report.summary.not_applicable_records == 0, || "skipped records".into())?;
    Ok(format!("{} records", report.summary.records))
}

fn contraction_suite() -> Verdict {
    let report = run(&SuiteSpec::new(Suite::Contraction))?;
    clean(&report)?;
    ensure(report.summary.not_applicable_records == 0, || {
        format!("{} records skipped", report.summary.not_applicable_records)
    })?;
    for p in [0.25, 0.5, 0.75] {
        for q in [0.25, 0.5, 0.75] {
            let pair = FunctionPair::powers(p, q);
            let c = check_pair_conditions(&pair, &default_pair_grid(&pair)).map_err(|e| e.to_string())?;
            ensure(c.all_hold(), || format!("pair {} fails a condition", pair.name()))?;
        }
    }
    let log_pair = FunctionPair::log_pair();
    let grid = log_spaced(std::f64::consts::E, 100.0, 256, true);
    let c = check_pair_conditions(&log_pair, &grid).map_err(|e| e.to_string())?;
    for cond in &c.conditions {
        ensure(cond.holds(), || {
            format!(
                "log pair: {} violated, worst relative excess {:.3e} at x = {:.3}",
                cond.label, cond.max_violation, cond.worst_point
            )
        })?;
    }
    Ok(format!("{} records, all pair conditions hold", report.summary.records))
}

// ---------------------------------------------------------------- criterion 8

/// Scalar stand-ins for the catalog functions, written out independently.
#[derive(Clone, Copy)]
enum Oracle {
    Pow(f64),
    Log1p,
    Expm1,
    Mobius,
}

impl Oracle {
    fn f(self, x: f64) -> f64 {
        match self {
            Oracle::Pow(r) => x.powf(r),
            Oracle::Log1p => (1.0 + x).ln(),
            Oracle::Expm1 => x.exp() - 1.0,
            Oracle::Mobius => x / (1.0 + x),
        }
    }

    fn df(self, x: f64) -> f64 {
        match self {
            Oracle::Pow(r) => r * x.powf(r - 1.0),
            Oracle::Log1p => 1.0 / (1.0 + x),
            Oracle::Expm1 => x.exp(),
            Oracle::Mobius => 1.0 / ((1.0 + x) * (1.0 + x)),
        }
    }

    fn convex(self) -> bool {
        match self {
            Oracle::Pow(r) => r >= 1.0,
            Oracle::Expm1 => true,
            Oracle::Log1p | Oracle::Mobius => false,
        }
    }

    /// Convexity of the inverse function on the positive axis.
    fn inverse_convex(self) -> bool {
        !self.convex()
    }
}

const ORACLE_FUNCTIONS: [(&str, Oracle); 8] = [
    ("power:3/2", Oracle::Pow(1.5)),
    ("power:2", Oracle::Pow(2.0)),
    ("power:3", Oracle::Pow(3.0)),
    ("expm1", Oracle::Expm1),
    ("sqrt", Oracle::Pow(0.5)),
    ("power:2/3", Oracle::Pow(2.0 / 3.0)),
    ("log1p", Oracle::Log1p),
    ("mobius", Oracle::Mobius),
];

#[derive(Clone, Copy)]
enum OracleMean {
    Arith(f64),
    Harm(f64),
    Geo(f64),
}

impl OracleMean {
    fn eval(self, a: f64, b: f64) -> f64 {
        match self {
            OracleMean::Arith(t) => (1.0 - t) * a + t * b,
            OracleMean::Harm(t) => a * b / ((1.0 - t) * b + t * a),
            OracleMean::Geo(t) => a.powf(1.0 - t) * b.powf(t),
        }
    }

    fn name(self) -> String {
        let (kind, t) = match self {
            OracleMean::Arith(t) => ("arithmetic", t),
            OracleMean::Harm(t) => ("harmonic", t),
            OracleMean::Geo(t) => ("geometric", t),
        };
        format!("{kind}:{t}")
    }

    fn catalog() -> Vec<OracleMean> {
        let mut v = Vec::new();
        for t in [0.25, 0.5, 0.75] {
            v.extend([OracleMean::Arith(t), OracleMean::Harm(t), OracleMean::Geo(t)]);
        }
        v
    }
}

type Diag = Vec<f64>;

fn zip(a: &[f64], b: &[f64], op: impl Fn(f64, f64) -> f64) -> Diag {
    a.iter().zip(b).map(|(&x, &y)| op(x, y)).collect()
}

fn map(a: &[f64], op: impl Fn(f64) -> f64) -> Diag {
    a.iter().map(|&x| op(x)).collect()
}

fn mul(c: f64, a: &[f64]) -> Option<Diag> {
    c.is_finite().then(|| map(a, |x| c * x))
}

/// `min_i (y_i - x_i)`: the margin of `diag(x) <= diag(y)`.
fn gap(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| b - a).fold(f64::INFINITY, f64::min)
}

fn chain(terms: &[Option<Diag>], forward: bool) -> Vec<Option<f64>> {
    terms
        .windows(2)
        .map(|w| match (&w[0], &w[1]) {
            (Some(lo), Some(hi)) => Some(if forward { gap(lo, hi) } else { gap(hi, lo) }),
            _ => None,
        })
        .collect()
}

fn compare(label: &str, out: &CheckOutcome, expected: &[Option<f64>]) -> Result<f64, String> {
    ensure(out.not_applicable.is_none(), || format!("{label}: skipped: {:?}", out.not_applicable))?;
    ensure(out.links.len() == expected.len(), || {
        format!("{label}: {} links, oracle has {}", out.links.len(), expected.len())
    })?;
    let mut worst: f64 = 0.0;
    for (link, want) in out.links.iter().zip(expected) {
        match want {
            Some(m) => {
                ensure(link.status == LinkStatus::Checked, || format!("{label}: {} not checked", link.description))?;
                let d = (link.margin - m).abs();
                ensure(d <= 1e-10, || {
                    format!("{label}: {} margin {} vs oracle {m} (diff {d:e})", link.description, link.margin)
                })?;
                worst = worst.max(d);
            }
            None => ensure(link.status == LinkStatus::Vacuous, || {
                format!("{label}: {} should be vacuous", link.description)
            })?,
        }
    }
    Ok(worst)
}

fn diag_pair(rng: &mut SplitMix64, n: usize) -> (Diag, Diag) {
    let a = (0..n).map(|_| rng.uniform(0.5, 4.0)).collect();
    let b = (0..n).map(|_| rng.uniform(0.5, 4.0)).collect();
    (a, b)
}

fn herm(d: &[f64]) -> HermitianMatrix {
    HermitianMatrix::from_real_diag(d)
}

fn bounds(a: &[f64], b: &[f64]) -> (f64, f64) {
    let all = a.iter().chain(b);
    (all.clone().cloned().fold(f64::INFINITY, f64::min), all.cloned().fold(f64::NEG_INFINITY, f64::max))
}

fn oracle_equivalence() -> Verdict {
    const INSTANCES: usize = 100;
    let tol = DEFAULT_TOL;
    let mut rng = SplitMix64::new(0x5eed_0808);
    let means = OracleMean::catalog();
    let mut worst: f64 = 0.0;
    let err = |e: matineq::Error| e.to_string();

    for i in 0..INSTANCES {
        let n = 2 + i % 5;
        let (fname, fo) = ORACLE_FUNCTIONS[i % ORACLE_FUNCTIONS.len()];
        let mo = means[i % means.len()];
        let f = ScalarFunction::by_name(fname).map_err(err)?;
        let sigma = MatrixMean::by_name(&mo.name()).map_err(err)?;

        // chord bounds
        let (a, b) = diag_pair(&mut rng, n);
        let (m, big_m) = bounds(&a, &b);
        let (ca, cb) = (fo.df(m), fo.df(big_m));
        let tangent = |x: &[f64], c: f64| map(x, |v| c * (v - m) + fo.f(m));
        let side = |c: f64| zip(&tangent(&a, c), &tangent(&b, c), |x, y| mo.eval(x, y));
        let fa = map(&a, |x| fo.f(x));
        let fb = map(&b, |x| fo.f(x));
        let mid = zip(&fa, &fb, |x, y| mo.eval(x, y));
        let want = chain(&[Some(side(ca)), Some(mid.clone()), Some(side(cb))], fo.convex());
        let out = check_chord_bounds(&f, &sigma, &herm(&a), &herm(&b), tol).map_err(err)?;
        worst = worst.max(compare("chord", &out, &want)?);

        // main chains
        let (a, b) = diag_pair(&mut rng, n);
        let (m, big_m) = bounds(&a, &b);
        let g = zip(&a, &b, |x, y| mo.eval(x, y));
        let coeffs = [fo.df(0.0), fo.f(m) / m, fo.f(big_m) / big_m, fo.df(big_m)];
        let f_mean = zip(&map(&a, |x| fo.f(x)), &map(&b, |x| fo.f(x)), |x, y| mo.eval(x, y));
        let f_of_mean = map(&g, |x| fo.f(x));
        let mut want = Vec::new();
        for middle in [f_mean, f_of_mean] {
            let terms = [
                mul(coeffs[0], &g),
                mul(coeffs[1], &g),
                Some(middle),
                mul(coeffs[2], &g),
                mul(coeffs[3], &g),
            ];
            want.extend(chain(&terms, fo.convex()));
        }
        let out = check_main_chain(&f, &sigma, &herm(&a), &herm(&b), tol).map_err(err)?;
        worst = worst.max(compare("main chain", &out, &want)?);

        // log example
        let (a, b) = diag_pair(&mut rng, n);
        let (_, big_m) = bounds(&a, &b);
        let c = (1.0 + big_m).ln() / big_m;
        let lhs = zip(&a, &b, |x, y| c * (1.0 + x + y).ln());
        let rhs = zip(&a, &b, |x, y| (1.0 + x).ln() + (1.0 + y).ln());
        let out = check_log_example(&herm(&a), &herm(&b), big_m, tol).map_err(err)?;
        worst = worst.max(compare("log example", &out, &[Some(gap(&lhs, &rhs))])?);

        // power means and entropy
        let alpha = [0.25, 0.5, 0.75][i % 3];
        let r = [1.5, 2.0, 3.0][(i / 3) % 3];
        let (a, b) = diag_pair(&mut rng, n);
        let (m, big_m) = bounds(&a, &b);
        let (lo, hi) = (m.powf(r - 1.0), big_m.powf(r - 1.0));
        let geo = |x: f64, y: f64| x.powf(1.0 - alpha) * y.powf(alpha);
        let g = zip(&a, &b, geo);
        let gr = zip(&a, &b, |x, y| geo(x.powf(r), y.powf(r)));
        let s = zip(&a, &b, |x, y| x * (y / x).ln());
        let sr = zip(&a, &b, |x, y| x.powf(r) * (y.powf(r) / x.powf(r)).ln());
        let mut want = chain(&[mul(lo, &g), Some(gr), mul(hi, &g)], true);
        want.extend(chain(&[mul(lo, &s), Some(sr), mul(hi, &s)], true));
        let out = check_power_mean_bounds(&herm(&a), &herm(&b), alpha, r, tol).map_err(err)?;
        worst = worst.max(compare("power mean", &out, &want)?);

        // Ando-Hiai comparison
        let (a, b) = diag_pair(&mut rng, n);
        let (na, nb) = (bounds(&a, &a).1, bounds(&b, &b).1);
        let (a, b, nb) = if na > nb { (b, a, na) } else { (a, b, nb) };
        let g = zip(&a, &b, geo);
        let gr = zip(&a, &b, |x, y| geo(x.powf(r), y.powf(r)));
        let c_ah = bounds(&g, &g).1.powf(r - 1.0);
        let c_thm = nb.powf(r - 1.0);
        let want = [
            Some(gap(&gr, &map(&g, |x| c_ah * x))),
            Some(gap(&gr, &map(&g, |x| c_thm * x))),
            Some(c_thm - c_ah),
        ];
        let out = check_ando_hiai_comparison(&herm(&a), &herm(&b), alpha, r, tol).map_err(err)?;
        worst = worst.max(compare("ando-hiai", &out, &want)?);

        // bounds from the inverse function
        let (a, b) = diag_pair(&mut rng, n);
        let (m, big_m) = bounds(&a, &b);
        let g = zip(&a, &b, |x, y| mo.eval(x, y));
        let f_mean = zip(&map(&a, |x| fo.f(x)), &map(&b, |x| fo.f(x)), |x, y| mo.eval(x, y));
        let (cm, c_big) = (fo.f(m) / m, fo.f(big_m) / big_m);
        let (lo, hi) = if fo.inverse_convex() { (c_big, cm) } else { (cm, c_big) };
        let want = chain(&[mul(lo, &g), Some(f_mean), mul(hi, &g)], true);
        let out = check_inverse_function(&f, &sigma, &herm(&a), &herm(&b), tol).map_err(err)?;
        worst = worst.max(compare("inverse function", &out, &want)?);

        // contraction for (x^p, x^q) on an instance normalized so that A σ B has top eigenvalue 1
        let p: f64 = [0.25, 0.5, 0.75][i % 3];
        let q = [0.25, 0.5, 0.75][(i / 3) % 3];
        let (a, b) = diag_pair(&mut rng, n);
        let top = bounds(&zip(&a, &b, |x, y| x.powf(1.0 - q) * y.powf(q)), &[]).1;
        let (a, b) = (map(&a, |x| x / top), map(&b, |x| x / top));
        let mean_q = |x: &[f64], y: &[f64]| zip(x, y, |u, v| u.powf(1.0 - q) * v.powf(q));
        let ones = vec![1.0; n];
        let mut want = vec![Some(gap(&mean_q(&a, &b), &ones))];
        for k in 1..=3 {
            let e = (1.0 + p).powi(k);
            want.push(Some(gap(&mean_q(&map(&a, |x| x.powf(e)), &map(&b, |x| x.powf(e))), &ones)));
        }
        let pair = FunctionPair::powers(p, q);
        let out = check_contraction_implication(&pair, &herm(&a), &herm(&b), 3, tol).map_err(err)?;
        worst = worst.max(compare("contraction", &out, &want)?);
    }
    Ok(format!("{INSTANCES} instances per checker, largest margin difference {worst:.1e}"))
}

// ---------------------------------------------------------------- criterion 9

fn numerical_hygiene() -> Verdict {
    let mut functions = function_catalog();
    functions.extend([ScalarFunction::by_name("log").unwrap(), ScalarFunction::by_name("x/log").unwrap()]);
    let mut worst_fd: f64 = 0.0;
    for f in &functions {
        let lo = if f.name() == "x/log" { 1.5 } else { 0.1 };
        for x in log_spaced(lo, 10.0, 40, true) {
            let h = 1e-5 * x;
            let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
            let d = f.deriv(x);
            let rel = (d - fd).abs() / d.abs().max(1.0);
            ensure(rel <= 1e-6, || format!("{}: f'({x}) = {d}, difference quotient {fd}", f.name()))?;
            worst_fd = worst_fd.max(rel);
        }
    }

    let mut rng = SplitMix64::new(0xe16e_0001);
    let mut worst_eig: f64 = 0.0;
    for k in 0..1000 {
        let n = 1 + k % 16;
        let x = ComplexMatrix::from_fn(n, |_, _| rng.complex_gaussian());
        let h = HermitianMatrix::from_matrix(&x);
        let s = eigh(&h).map_err(|e| e.to_string())?;
        let err = s.reconstruct().sub(&h).as_matrix().frobenius() / h.as_matrix().frobenius();
        ensure(err <= 1e-10, || format!("reconstruction error {err:e} at dim {n}"))?;
        worst_eig = worst_eig.max(err);
    }
    Ok(format!(
        "derivative error {worst_fd:.1e}, reconstruction error {worst_eig:.1e}"
    ))
}

// ---------------------------------------------------------------- criterion 10

fn strip_wall_time(mut report: Report) -> String {
    report.summary.wall_time_seconds = 0.0;
    report.to_json()
}

fn determinism() -> Verdict {
    for suite in Suite::ALL {
        let mut spec = SuiteSpec::new(suite);
        spec.trials = 4;
        spec.dims = vec![2, 4];
        let runs: Vec<String> = [1, 4]
            .into_iter()
            .map(|jobs| {
                run_suite(&spec, RunOptions { jobs: Some(jobs) })
                    .map(strip_wall_time)
                    .map_err(|e| format!("{suite}: {e}"))
            })
            .collect::<Result<_, _>>()?;
        ensure(runs[0] == runs[1], || format!("{suite}: reports differ between 1 and 4 jobs"))?;
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut texts = Vec::new();
    for jobs in ["1", "4", "4"] {
        let path = dir.path().join(format!("report-{}.json", texts.len()));
        let status = Command::new(env!("CARGO_BIN_EXE_matineq"))
            .args(["run", "--suite", "main_chain", "--trials", "10", "--jobs", jobs, "--report"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?
            .status;
        ensure(status.success(), || format!("binary exited with {status}"))?;
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        texts.push(strip_wall_time(Report::from_json(&text).map_err(|e| e.to_string())?));
    }
    ensure(texts.iter().all(|t| *t == texts[0]), || "binary reports differ".into())?;
    Ok(format!("{} suites through the library, binary at 1 and 4 jobs", Suite::ALL.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("normal-matrix fixture", fixture),
        ("main chains", main_chain_suite),
        ("norm-difference and eigenvalue/product/norm chains", norm_chain_suites),
        ("normal-matrix chains", normal_suite),
        ("determinant inequalities", determinant_suite),
        ("Ando-Hiai comparison", ando_hiai_suite),
        ("contraction and pair conditions", contraction_suite),
        ("diagonal oracle equivalence", oracle_equivalence),
        ("numerical hygiene", numerical_hygiene),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = check();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
