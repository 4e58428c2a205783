//! Checkers for positive semidefinite operands: the chord lemma, the main
//! coefficient chains around `f(A) σ f(B)` and `f(A σ B)`, their eigenvalue,
//! product and norm corollaries, and the subadditivity refinement.

use super::{
    apply_clamped, matrix_chain, norms_or_default, scalar_chain, scaled, times, CheckOutcome, Direction, LinkStatus,
    Term,
};
use crate::error::{Error, Result};
use crate::functions::{chord_coefficients, log1p, log_spaced, Convexity, ScalarFunction};
use crate::linalg::{eigh, norm, spectral_bounds, HermitianMatrix, NormKind};
use crate::means::MatrixMean;

/// Shared evaluation for the chains: bounds, `A σ B` and `f(A) σ f(B)`.
struct MeanInstance {
    m: f64,
    big_m: f64,
    mean: HermitianMatrix,
    f_mean: HermitianMatrix,
}

fn mean_instance(
    out: &mut CheckOutcome,
    f: &ScalarFunction,
    sigma: &MatrixMean,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: f64,
) -> Result<MeanInstance> {
    if !f.fixes_zero() {
        return Err(Error::Hypothesis(format!("`{}` does not fix zero", f.name())));
    }
    let (m, big_m) = spectral_bounds(a, b)?;
    if !(m > 0.0) {
        return Err(Error::InvalidInterval {
            lo: m,
            hi: big_m,
            reason: "need m > 0".into(),
        });
    }
    record_common(out, f, Some(sigma), a.dim(), m, big_m);
    let g = sigma.apply_detailed(a, b, tol)?;
    let fa = apply_clamped(f, a, tol)?;
    let fb = apply_clamped(f, b, tol)?;
    let fg = sigma.apply_detailed(&fa, &fb, tol)?;
    if let Some(eps) = g.regularization.or(fg.regularization) {
        out.value("regularization", eps);
    }
    Ok(MeanInstance {
        m,
        big_m,
        mean: g.value,
        f_mean: fg.value,
    })
}

fn record_common(
    out: &mut CheckOutcome,
    f: &ScalarFunction,
    sigma: Option<&MatrixMean>,
    dim: usize,
    m: f64,
    big_m: f64,
) {
    out.param("function", f.name()).param("dim", dim);
    if let Some(s) = sigma {
        out.param("mean", s.name());
    }
    out.value("m", m).value("M", big_m);
}

/// `f'(0), f(m)/m, f(M)/M, f'(M)`.
fn coefficients(out: &mut CheckOutcome, f: &ScalarFunction, m: f64, big_m: f64) -> [f64; 4] {
    let c = [f.deriv(0.0), f.eval(m) / m, f.eval(big_m) / big_m, f.deriv(big_m)];
    for (k, v) in ["f'(0)", "f(m)/m", "f(M)/M", "f'(M)"].iter().zip(c) {
        out.value(k, v);
    }
    c
}

/// Chord lemma: `(a(A-mI)+f(m)I) σ (a(B-mI)+f(m)I) <= f(A) σ f(B) <= (b(A-mI)+f(m)I) σ (b(B-mI)+f(m)I)`,
/// reversed for concave `f`.
pub fn check_chord_bounds(
    f: &ScalarFunction,
    sigma: &MatrixMean,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: f64,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("chord_bounds", "chord lemma");
    let dir = Direction::of(f)?;
    let (m, big_m) = spectral_bounds(a, b)?;
    let scale = 1.0 + big_m.abs().max(m.abs());
    if m < -tol * scale {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: m });
    }
    let m = m.max(0.0);
    record_common(&mut out, f, Some(sigma), a.dim(), m, big_m);
    let (ca, cb) = if big_m - m <= f64::EPSILON * scale {
        let d = f.deriv(m);
        (d, d)
    } else {
        let chord = chord_coefficients(f, m, big_m)?;
        (chord.a, chord.b)
    };
    for (name, c) in [("a", ca), ("b", cb)] {
        if !c.is_finite() {
            return Err(Error::InfiniteCoefficient {
                name: format!("{name} = {}'", f.name()),
            });
        }
        out.value(name, c);
    }
    let fm = f.try_eval(m)?;
    let tangent = |x: &HermitianMatrix, c: f64| x.affine(c, fm - c * m);
    let lower = sigma.apply_detailed(&tangent(a, ca), &tangent(b, ca), tol)?;
    let upper = sigma.apply_detailed(&tangent(a, cb), &tangent(b, cb), tol)?;
    let fa = apply_clamped(f, a, tol)?;
    let fb = apply_clamped(f, b, tol)?;
    let middle = sigma.apply_detailed(&fa, &fb, tol)?;
    if let Some(eps) = lower.regularization.or(upper.regularization).or(middle.regularization) {
        out.value("regularization", eps);
    }
    let terms = [
        Term::new("(a(A-mI)+f(m)I) σ (a(B-mI)+f(m)I)", Some(lower.value)),
        Term::new("f(A) σ f(B)", Some(middle.value)),
        Term::new("(b(A-mI)+f(m)I) σ (b(B-mI)+f(m)I)", Some(upper.value)),
    ];
    matrix_chain(&mut out, "", &terms, dir, tol)?;
    Ok(out)
}

/// Both coefficient chains: around `f(A) σ f(B)` and around `f(A σ B)`.
pub fn check_main_chain(
    f: &ScalarFunction,
    sigma: &MatrixMean,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: f64,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("main_chain", "coefficient chains for f(A)σf(B) and f(AσB)");
    let dir = Direction::of(f)?;
    let inst = mean_instance(&mut out, f, sigma, a, b, tol)?;
    let f_of_mean = apply_clamped(f, &inst.mean, tol)?;
    let [d0, cm, c_big, d_big] = coefficients(&mut out, f, inst.m, inst.big_m);
    let g = &inst.mean;
    for (prefix, middle_label, middle) in [
        ("[f(A)σf(B)] ", "f(A)σf(B)", inst.f_mean.clone()),
        ("[f(AσB)] ", "f(AσB)", f_of_mean),
    ] {
        let terms = [
            Term::new("f'(0)(AσB)", scaled(d0, g)),
            Term::new("(f(m)/m)(AσB)", scaled(cm, g)),
            Term::new(middle_label, Some(middle)),
            Term::new("(f(M)/M)(AσB)", scaled(c_big, g)),
            Term::new("f'(M)(AσB)", scaled(d_big, g)),
        ];
        matrix_chain(&mut out, prefix, &terms, dir, tol)?;
    }
    Ok(out)
}

/// `(log(M+1)/M) log(A+B+I) <= log(A+I) + log(B+I)`; the coefficient is 1 at `M = 0`.
pub fn check_log_example(a: &HermitianMatrix, b: &HermitianMatrix, big_m: f64, tol: f64) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("log_example", "log(x+1) example");
    a.as_matrix().ensure_same_dim(b.as_matrix())?;
    if !(big_m >= 0.0) {
        return Err(Error::InvalidInterval {
            lo: 0.0,
            hi: big_m,
            reason: "need M >= 0".into(),
        });
    }
    let f = log1p();
    out.param("function", f.name()).param("dim", a.dim());
    out.value("M", big_m);
    let c = if big_m == 0.0 { 1.0 } else { big_m.ln_1p() / big_m };
    out.value("log(M+1)/M", c);
    let lhs = apply_clamped(&f, &a.add(b), tol)?.scale(c);
    let rhs = apply_clamped(&f, a, tol)?.add(&apply_clamped(&f, b, tol)?);
    out.loewner("(log(M+1)/M) log(A+B+I) <= log(A+I) + log(B+I)", &lhs, &rhs, tol)?;
    Ok(out)
}

/// `|||f(A)σf(B) - f(AσB)||| <= |f'(M) - f'(0)| |||AσB|||` for each norm.
pub fn check_mean_difference_norm(
    f: &ScalarFunction,
    sigma: &MatrixMean,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    norms: &[NormKind],
    tol: f64,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("mean_difference_norm", "norm bound on f(A)σf(B) - f(AσB)");
    Direction::of(f)?;
    let inst = mean_instance(&mut out, f, sigma, a, b, tol)?;
    let (d0, d_big) = (f.deriv(0.0), f.deriv(inst.big_m));
    if !d0.is_finite() || !d_big.is_finite() {
        return Err(Error::InfiniteCoefficient {
            name: format!("{}'", f.name()),
        });
    }
    let kappa = (d_big - d0).abs();
    out.value("|f'(M)-f'(0)|", kappa);
    let diff = inst.f_mean.sub(&apply_clamped(f, &inst.mean, tol)?);
    for kind in norms_or_default(norms) {
        let lhs = norm(diff.as_matrix(), kind)?;
        let rhs = kappa * norm(inst.mean.as_matrix(), kind)?;
        out.scalar(
            format!("[{kind}] |||f(A)σf(B) - f(AσB)||| <= |f'(M)-f'(0)| |||AσB|||"),
            lhs,
            rhs,
            tol,
        );
    }
    Ok(out)
}

/// Eigenvalue, eigenvalue-product and unitarily invariant norm versions of
/// the chain around `f(A) σ f(B)`, over every norm of [`NormKind::catalog`].
pub fn check_eig_prod_norm(
    f: &ScalarFunction,
    sigma: &MatrixMean,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: f64,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("eig_prod_norm", "eigenvalue, product and norm chains");
    let dir = Direction::of(f)?;
    let inst = mean_instance(&mut out, f, sigma, a, b, tol)?;
    let coef = coefficients(&mut out, f, inst.m, inst.big_m);
    let labels = ["f'(0)", "(f(m)/m)", "(f(M)/M)", "f'(M)"];
    let lam = eigh(&inst.mean)?.values;
    let mu = eigh(&inst.f_mean)?.values;

    let chain = |out: &mut CheckOutcome, prefix: &str, middle: (&str, f64), base: (&str, f64), coef: [f64; 4]| {
        let mut terms: Vec<Term<f64>> = coef
            .iter()
            .zip(labels)
            .map(|(&c, l)| Term::new(format!("{l}{}", base.0), times(c, base.1)))
            .collect();
        terms.insert(2, Term::new(middle.0, Some(middle.1)));
        scalar_chain(out, prefix, &terms, dir, tol);
    };

    for (j, (&l, &u)) in lam.iter().zip(&mu).enumerate() {
        let j = j + 1;
        chain(
            &mut out,
            &format!("[eig j={j}] "),
            (&format!("λ_{j}(f(A)σf(B))"), u),
            (&format!("λ_{j}(AσB)"), l),
            coef,
        );
    }

    if let Some(&lmin) = lam.last() {
        if !(lmin > 0.0) {
            return Err(Error::Hypothesis(format!(
                "eigenvalue products need λ_j(AσB) > 0, got {lmin}"
            )));
        }
    }
    let (mut p, mut q) = (1.0, 1.0);
    for k in 1..=lam.len() {
        p *= lam[k - 1];
        q *= mu[k - 1];
        let pow = coef.map(|c| if c == 0.0 { 0.0 } else { c.powi(k as i32) });
        chain(
            &mut out,
            &format!("[prod k={k}] "),
            (&format!("Π_{{j<={k}}} λ_j(f(A)σf(B))"), q),
            (&format!("^{k} Π_{{j<={k}}} λ_j(AσB)"), p),
            pow,
        );
    }

    for kind in NormKind::catalog(a.dim()) {
        let ng = norm(inst.mean.as_matrix(), kind)?;
        let nf = norm(inst.f_mean.as_matrix(), kind)?;
        chain(&mut out, &format!("[{kind}] "), ("|||f(A)σf(B)|||", nf), ("|||AσB|||", ng), coef);
    }
    Ok(out)
}

/// Whether `f(x)/x` is nondecreasing on 64 log-spaced points of `(0, hi]`.
fn ratio_nondecreasing(f: &ScalarFunction, hi: f64) -> bool {
    let grid = log_spaced(hi * 1e-3, hi, 64, true);
    grid.windows(2).all(|w| {
        let (r0, r1) = (f.eval(w[0]) / w[0], f.eval(w[1]) / w[1]);
        r1 >= r0 - 1e-12 * (1.0 + r0.abs())
    })
}

/// `|||f(A)+f(B)||| <= (f(M)/M)|||A+B||| <= |||f(A+B)|||` for convex `f`;
/// the second link needs `M I <= A + B` and is marked not applicable otherwise.
pub fn check_subadditivity_refinement(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    norms: &[NormKind],
    tol: f64,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("subadditivity_refinement", "refined norm superadditivity");
    if f.convexity() != Convexity::Convex {
        return Err(Error::Hypothesis(format!("`{}` is not tagged convex", f.name())));
    }
    if !f.fixes_zero() {
        return Err(Error::Hypothesis(format!("`{}` does not fix zero", f.name())));
    }
    let (m, big_m) = spectral_bounds(a, b)?;
    if m < -tol * (1.0 + big_m.abs()) {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: m });
    }
    record_common(&mut out, f, None, a.dim(), m.max(0.0), big_m);
    let c = f.slope_from_origin(big_m);
    out.value("f(M)/M", c);
    let sum = a.add(b);
    let sum_min = eigh(&sum)?.min();
    out.value("λ_min(A+B)", sum_min);
    let bridging = ratio_nondecreasing(f, big_m.max(f64::MIN_POSITIVE))
        && sum_min >= big_m - tol * (1.0 + big_m.abs());
    out.param("bridging_applicable", bridging);

    let f_sum_parts = apply_clamped(f, a, tol)?.add(&apply_clamped(f, b, tol)?);
    let f_of_sum = apply_clamped(f, &sum, tol)?;
    for kind in norms_or_default(norms) {
        let lhs = norm(f_sum_parts.as_matrix(), kind)?;
        let mid = c * norm(sum.as_matrix(), kind)?;
        let rhs = norm(f_of_sum.as_matrix(), kind)?;
        out.scalar(format!("[{kind}] |||f(A)+f(B)||| <= (f(M)/M)|||A+B|||"), lhs, mid, tol);
        let desc = format!("[{kind}] (f(M)/M)|||A+B||| <= |||f(A+B)|||");
        if bridging {
            out.scalar(desc, mid, rhs, tol);
        } else {
            out.skipped(desc, LinkStatus::NotApplicable);
        }
        out.scalar(format!("[{kind}] |||f(A)+f(B)||| <= |||f(A+B)|||"), lhs, rhs, tol);
    }
    Ok(out)
}

/// Coefficient placement given by the convexity of `f^{-1}`:
/// convex inverse gives `(f(M)/M)(AσB) <= f(A)σf(B) <= (f(m)/m)(AσB)`,
/// concave inverse exchanges `m` and `M`.
pub fn check_inverse_function(
    f: &ScalarFunction,
    sigma: &MatrixMean,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: f64,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("inverse_function", "bounds from a convex or concave inverse");
    let inverse = f
        .inverse()
        .ok_or_else(|| Error::MissingInverse(f.name().to_string()))?
        .clone();
    let inst = mean_instance(&mut out, f, sigma, a, b, tol)?;
    out.param("inverse", inverse.name());
    let grid = log_spaced(inst.m, inst.big_m.max(inst.m * (1.0 + 1e-9)), 64, true);
    let mut prev = f.try_eval(inst.m)?;
    for &x in &grid {
        let y = f.try_eval(x)?;
        if y < prev {
            return Err(Error::Hypothesis(format!("`{}` is not increasing on [m, M]", f.name())));
        }
        prev = y;
    }
    let cm = f.eval(inst.m) / inst.m;
    let c_big = f.eval(inst.big_m) / inst.big_m;
    out.value("f(m)/m", cm).value("f(M)/M", c_big);
    let g = &inst.mean;
    let (lo, hi) = match inverse.convexity() {
        Convexity::Convex => (("(f(M)/M)(AσB)", c_big), ("(f(m)/m)(AσB)", cm)),
        Convexity::Concave => (("(f(m)/m)(AσB)", cm), ("(f(M)/M)(AσB)", c_big)),
        Convexity::Neither => {
            out.not_applicable = Some(format!("inverse `{}` is neither convex nor concave", inverse.name()));
            return Ok(out);
        }
    };
    let terms = [
        Term::new(lo.0, scaled(lo.1, g)),
        Term::new("f(A)σf(B)", Some(inst.f_mean.clone())),
        Term::new(hi.0, scaled(hi.1, g)),
    ];
    matrix_chain(&mut out, "", &terms, Direction::Forward, tol)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{identity, power, sqrt};

    fn diag(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diag(v)
    }

    fn arith() -> MatrixMean {
        MatrixMean::arithmetic(0.5).unwrap()
    }

    #[test]
    fn chord_square_diagonal() {
        let out = check_chord_bounds(&power(2.0), &arith(), &diag(&[1.0, 4.0]), &diag(&[2.0, 3.0]), 1e-8).unwrap();
        assert_eq!(out.links.len(), 2);
        // lower: diag(2,6) vs diag(2.5,12.5); upper: diag(2.5,12.5) vs diag(5,21)
        assert!((out.links[0].margin - 0.5).abs() < 1e-12);
        assert!((out.links[1].margin - 2.5).abs() < 1e-12);
        assert!(out.pass());
    }

    #[test]
    fn main_chain_square_diagonal() {
        let out = check_main_chain(&power(2.0), &arith(), &diag(&[1.0, 4.0]), &diag(&[2.0, 3.0]), 1e-8).unwrap();
        assert_eq!(out.links.len(), 8);
        assert!(out.pass());
        // 1·diag(1.5,3.5) <= diag(2.5,12.5)
        assert!((out.links[1].margin - 1.0).abs() < 1e-12);
        // diag(2.5,12.5) <= diag(6,14)
        assert!((out.links[2].margin - 1.5).abs() < 1e-12);
    }

    #[test]
    fn concave_chain_marks_infinite_link_vacuous() {
        let out = check_main_chain(&sqrt(), &arith(), &diag(&[1.0, 4.0]), &diag(&[2.0, 3.0]), 1e-8).unwrap();
        assert_eq!(out.links[0].status, LinkStatus::Vacuous);
        assert!(out.pass());
    }

    #[test]
    fn log_example_values() {
        let i = HermitianMatrix::identity(2);
        let out = check_log_example(&i, &i, 1.0, 1e-8).unwrap();
        let want = 2.0 * 2f64.ln() - 2f64.ln() * 3f64.ln();
        assert!((out.links[0].margin - want).abs() < 1e-12);
        let z = HermitianMatrix::zeros(2);
        let out = check_log_example(&z, &z, 0.0, 1e-8).unwrap();
        assert_eq!(out.links[0].margin, 0.0);
    }

    #[test]
    fn mean_difference_values() {
        let out = check_mean_difference_norm(
            &power(2.0),
            &arith(),
            &diag(&[1.0, 4.0]),
            &diag(&[2.0, 3.0]),
            &[NormKind::Operator, NormKind::Trace],
            1e-8,
        )
        .unwrap();
        assert!((out.links[0].margin - (28.0 - 0.25)).abs() < 1e-12);
        assert!((out.links[1].margin - (40.0 - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn subadditivity_bridging_not_applicable() {
        let out = check_subadditivity_refinement(
            &power(2.0),
            &diag(&[1.0, 4.0]),
            &diag(&[2.0, 3.0]),
            &[NormKind::Operator],
            1e-8,
        )
        .unwrap();
        assert!((out.links[0].margin - 3.0).abs() < 1e-12);
        assert_eq!(out.links[1].status, LinkStatus::NotApplicable);
        assert!((out.links[2].margin - 24.0).abs() < 1e-12);
    }

    #[test]
    fn identity_inverse_is_equality() {
        let out = check_inverse_function(&identity(), &arith(), &diag(&[1.0, 4.0]), &diag(&[2.0, 3.0]), 1e-8).unwrap();
        assert!(out.links.iter().all(|l| l.margin.abs() < 1e-12));
    }

    #[test]
    fn sqrt_inverse_bounds() {
        let out = check_inverse_function(&sqrt(), &arith(), &diag(&[1.0, 4.0]), &diag(&[2.0, 3.0]), 1e-8).unwrap();
        assert!(out.pass());
        let want = ((1.0 + 2f64.sqrt()) / 2.0 - 0.75).min((2.0 + 3f64.sqrt()) / 2.0 - 1.75);
        assert!((out.links[0].margin - want).abs() < 1e-12);
    }
}
