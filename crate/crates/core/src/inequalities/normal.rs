//! Checkers for normal operands, where `f` acts on `|A| = (A*A)^{1/2}`.

use super::{apply_clamped, norms_or_default, scalar_chain, times, CheckOutcome, Direction, Term};
use crate::error::{Error, Result};
use crate::functions::{power, Convexity, ScalarFunction};
use crate::linalg::{matrix_abs, norm, spectral_bounds, ComplexMatrix, HermitianMatrix, NormKind, DEFAULT_TOL};

/// The fixed pair `A = diag(2, -1)`, `B = diag(-2, 1)`.
pub fn normal_fixture() -> (ComplexMatrix, ComplexMatrix) {
    (
        ComplexMatrix::from_real_diag(&[2.0, -1.0]),
        ComplexMatrix::from_real_diag(&[-2.0, 1.0]),
    )
}

fn ensure_normal(a: &ComplexMatrix, tol: f64) -> Result<()> {
    let defect = a.normality_defect();
    let fro = a.frobenius();
    if !a.is_finite() || defect > tol * (1.0 + fro * fro) {
        return Err(Error::NotNormal { defect });
    }
    Ok(())
}

struct AbsPair {
    abs_a: HermitianMatrix,
    abs_b: HermitianMatrix,
    m: f64,
    big_m: f64,
}

fn abs_pair(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<AbsPair> {
    a.ensure_same_dim(b)?;
    ensure_normal(a, tol)?;
    ensure_normal(b, tol)?;
    let abs_a = matrix_abs(a, true)?;
    let abs_b = matrix_abs(b, true)?;
    let (m, big_m) = spectral_bounds(&abs_a, &abs_b)?;
    Ok(AbsPair {
        abs_a,
        abs_b,
        m: m.max(0.0),
        big_m,
    })
}

/// Evaluates the upper norm chain on the fixture with `f(x) = x^2` and
/// asserts that both left sides strictly exceed `(f(M)/M)||A+B|| = f'(M)||A+B|| = 0`.
pub fn check_normal_counterexample() -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("normal_counterexample", "norm chain fails for normal matrices");
    let (a, b) = normal_fixture();
    let f = power(2.0);
    let tol = DEFAULT_TOL;
    let p = abs_pair(&a, &b, tol)?;
    out.param("function", f.name()).param("dim", 2).param("norm", NormKind::Operator);
    out.value("m", p.m).value("M", p.big_m);

    let op = |x: &ComplexMatrix| norm(x, NormKind::Operator);
    let sum_f = apply_clamped(&f, &p.abs_a, tol)?.add(&apply_clamped(&f, &p.abs_b, tol)?);
    let f_sum = apply_clamped(&f, &p.abs_a.add(&p.abs_b), tol)?;
    let norm_sum = op(&(&a + &b))?;
    let lhs1 = op(sum_f.as_matrix())?;
    let lhs2 = op(f_sum.as_matrix())?;
    let coef = f.eval(p.big_m) / p.big_m * norm_sum;
    let deriv = f.deriv(p.big_m) * norm_sum;
    out.value("||f(|A|)+f(|B|)||", lhs1)
        .value("||f(|A|+|B|)||", lhs2)
        .value("(f(M)/M)||A+B||", coef)
        .value("f'(M)||A+B||", deriv)
        .value("||A+B||", norm_sum);
    out.exceeds("||f(|A|)+f(|B|)|| > (f(M)/M)||A+B||", lhs1, coef, tol);
    out.exceeds("||f(|A|+|B|)|| > f'(M)||A+B||", lhs2, deriv, tol);
    Ok(out)
}

/// `|||A+B||| <= ||| |A|+|B| |||` for normal `A`, `B`.
pub fn check_normal_triangle(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    norms: &[NormKind],
    tol: f64,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("normal_triangle", "triangle inequality through moduli");
    let p = abs_pair(a, b, tol)?;
    out.param("dim", a.dim());
    let sum = a + b;
    let abs_sum = p.abs_a.add(&p.abs_b);
    for kind in norms_or_default(norms) {
        out.scalar(
            format!("[{kind}] |||A+B||| <= ||| |A|+|B| |||"),
            norm(&sum, kind)?,
            norm(abs_sum.as_matrix(), kind)?,
            tol,
        );
    }
    Ok(out)
}

/// Lower chains for normal `A`, `B`, with `m`, `M` the bounds of the spectra of `|A|`, `|B|`:
/// convex `f` gives `f'(0)N <= (f(m)/m)N <= |||f(|A|)+f(|B|)|||` and
/// `f'(0)N <= (f(2m)/2m)N <= |||f(|A|+|B|)|||` with `N = |||A+B|||`;
/// concave `f` uses `f'(M)`, `f(M)/M` and `f(2M)/2M`.
pub fn check_normal_chain(
    f: &ScalarFunction,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    norms: &[NormKind],
    tol: f64,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("normal_chain", "lower norm chains for normal matrices");
    let dir = Direction::of(f)?;
    if !f.fixes_zero() {
        return Err(Error::Hypothesis(format!("`{}` does not fix zero", f.name())));
    }
    let p = abs_pair(a, b, tol)?;
    if !(p.m > 0.0) {
        return Err(Error::InvalidInterval {
            lo: p.m,
            hi: p.big_m,
            reason: "need m > 0".into(),
        });
    }
    out.param("function", f.name()).param("dim", a.dim());
    out.value("m", p.m).value("M", p.big_m);
    let (labels, coef) = match dir {
        Direction::Forward => (
            ["f'(0)", "(f(m)/m)", "(f(2m)/2m)"],
            [f.deriv(0.0), f.eval(p.m) / p.m, f.eval(2.0 * p.m) / (2.0 * p.m)],
        ),
        Direction::Reversed => (
            ["f'(M)", "(f(M)/M)", "(f(2M)/2M)"],
            [f.deriv(p.big_m), f.eval(p.big_m) / p.big_m, f.eval(2.0 * p.big_m) / (2.0 * p.big_m)],
        ),
    };
    for (l, c) in labels.iter().zip(coef) {
        out.value(l.trim_matches(|ch| ch == '(' || ch == ')'), c);
    }
    let sum = a + b;
    let sum_f = apply_clamped(f, &p.abs_a, tol)?.add(&apply_clamped(f, &p.abs_b, tol)?);
    let f_sum = apply_clamped(f, &p.abs_a.add(&p.abs_b), tol)?;
    for kind in norms_or_default(norms) {
        let n = norm(&sum, kind)?;
        let first = [
            Term::new(format!("{}|||A+B|||", labels[0]), times(coef[0], n)),
            Term::new(format!("{}|||A+B|||", labels[1]), times(coef[1], n)),
            Term::new("|||f(|A|)+f(|B|)|||", Some(norm(sum_f.as_matrix(), kind)?)),
        ];
        scalar_chain(&mut out, &format!("[{kind}] "), &first, Direction::Forward, tol);
        let second = [
            Term::new(format!("{}|||A+B|||", labels[0]), times(coef[0], n)),
            Term::new(format!("{}|||A+B|||", labels[2]), times(coef[2], n)),
            Term::new("|||f(|A|+|B|)|||", Some(norm(f_sum.as_matrix(), kind)?)),
        ];
        scalar_chain(&mut out, &format!("[{kind}] "), &second, Direction::Forward, tol);
    }
    Ok(out)
}

/// The upper norm chain that holds for positive definite pairs, evaluated on
/// normal pairs through `|A|`, `|B|` with `M` the largest modulus:
/// `|||f(|A|)+f(|B|)||| <= (f(M)/M)|||A+B||| <= f'(M)|||A+B|||` and
/// `|||f((|A|+|B|)/2)||| <= (f(M)/M)|||(A+B)/2|||`, for convex `f`.
pub fn check_normal_upper_chain(
    f: &ScalarFunction,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    norms: &[NormKind],
    tol: f64,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("normal_upper_chain", "upper norm chain off the positive cone");
    if f.convexity() != Convexity::Convex {
        return Err(Error::Hypothesis(format!("`{}` is not tagged convex", f.name())));
    }
    a.ensure_same_dim(b)?;
    let abs_a = matrix_abs(a, true)?;
    let abs_b = matrix_abs(b, true)?;
    let (_, big_m) = spectral_bounds(&abs_a, &abs_b)?;
    if !(big_m > 0.0) {
        return Err(Error::InvalidInterval {
            lo: 0.0,
            hi: big_m,
            reason: "need M > 0".into(),
        });
    }
    out.param("function", f.name()).param("dim", a.dim());
    out.value("M", big_m);
    let c = f.eval(big_m) / big_m;
    let d = f.deriv(big_m);
    let sum = a + b;
    let sum_f = apply_clamped(f, &abs_a, tol)?.add(&apply_clamped(f, &abs_b, tol)?);
    let f_mid = apply_clamped(f, &abs_a.add(&abs_b).scale(0.5), tol)?;
    for kind in norms_or_default(norms) {
        let n = norm(&sum, kind)?;
        let terms = [
            Term::new("|||f(|A|)+f(|B|)|||", Some(norm(sum_f.as_matrix(), kind)?)),
            Term::new("(f(M)/M)|||A+B|||", times(c, n)),
            Term::new("f'(M)|||A+B|||", times(d, n)),
        ];
        scalar_chain(&mut out, &format!("[{kind}] "), &terms, Direction::Forward, tol);
        out.scalar(
            format!("[{kind}] |||f((|A|+|B|)/2)||| <= (f(M)/M)|||(A+B)/2|||"),
            norm(f_mid.as_matrix(), kind)?,
            c * n / 2.0,
            tol,
        );
    }
    Ok(out)
}
