//! Weighted geometric means of powers, relative entropy of powers, and the
//! contraction implication for pairs `(g, h)`.

use super::{apply_clamped, matrix_chain, CheckOutcome, Direction, Term};
use crate::error::{Error, Result};
use crate::functions::{check_pair_conditions, default_pair_grid, iterate, power, FunctionPair, PairDirection};
use crate::linalg::{ensure_positive_definite, operator_norm, spectral_bounds, HermitianMatrix};
use crate::means::{relative_entropy, MatrixMean};

fn check_exponents(alpha: f64, r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidInput(format!("alpha = {alpha} outside [0, 1]")));
    }
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::InvalidInput(format!("r = {r} must be a finite value >= 1")));
    }
    Ok(())
}

/// `A #_α B` and `A^r #_α B^r`.
fn power_means(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
    r: f64,
    tol: f64,
) -> Result<(MatrixMean, HermitianMatrix, HermitianMatrix, HermitianMatrix, HermitianMatrix)> {
    ensure_positive_definite(a, tol)?;
    ensure_positive_definite(b, tol)?;
    let sigma = MatrixMean::geometric(alpha)?;
    let pr = power(r);
    let ar = apply_clamped(&pr, a, tol)?;
    let br = apply_clamped(&pr, b, tol)?;
    let g = sigma.apply_detailed(a, b, tol)?.value;
    let gr = sigma.apply_detailed(&ar, &br, tol)?.value;
    Ok((sigma, g, gr, ar, br))
}

/// `λ_min^{r-1} A#_αB <= A^r #_α B^r <= λ_max^{r-1} A#_αB` and the same
/// bounds with `S(A|B)` and `S(A^r|B^r)`.
pub fn check_power_mean_bounds(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
    r: f64,
    tol: f64,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("power_mean_bounds", "power bounds for weighted geometric means and entropy");
    check_exponents(alpha, r)?;
    let (sigma, g, gr, ar, br) = power_means(a, b, alpha, r, tol)?;
    let (lmin, lmax) = spectral_bounds(a, b)?;
    out.param("mean", sigma.name()).param("dim", a.dim()).param("alpha", alpha).param("r", r);
    let (lo, hi) = (lmin.powf(r - 1.0), lmax.powf(r - 1.0));
    out.value("m", lmin).value("M", lmax).value("m^(r-1)", lo).value("M^(r-1)", hi);

    let terms = [
        Term::new("m^(r-1) A#B", Some(g.scale(lo))),
        Term::new("A^r # B^r", Some(gr)),
        Term::new("M^(r-1) A#B", Some(g.scale(hi))),
    ];
    matrix_chain(&mut out, "[mean] ", &terms, Direction::Forward, tol)?;

    let s = relative_entropy(a, b, tol)?;
    let sr = relative_entropy(&ar, &br, tol)?;
    let terms = [
        Term::new("m^(r-1) S(A|B)", Some(s.scale(lo))),
        Term::new("S(A^r|B^r)", Some(sr)),
        Term::new("M^(r-1) S(A|B)", Some(s.scale(hi))),
    ];
    matrix_chain(&mut out, "[entropy] ", &terms, Direction::Forward, tol)?;
    Ok(out)
}

/// With `||A|| <= ||B||` (inputs swapped otherwise):
/// `A^r #_α B^r <= ||A#_αB||^{r-1} A#_αB`, `A^r #_α B^r <= ||B||^{r-1} A#_αB`
/// and `||A#_αB||^{r-1} <= ||B||^{r-1}`.
pub fn check_ando_hiai_comparison(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
    r: f64,
    tol: f64,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("ando_hiai_comparison", "Ando-Hiai bound against the spectral bound");
    check_exponents(alpha, r)?;
    let (na, nb) = (operator_norm(a)?, operator_norm(b)?);
    let swapped = na > nb;
    let (a, b, na, nb) = if swapped { (b, a, nb, na) } else { (a, b, na, nb) };
    let (sigma, g, gr, _, _) = power_means(a, b, alpha, r, tol)?;
    out.param("mean", sigma.name())
        .param("dim", a.dim())
        .param("alpha", alpha)
        .param("r", r)
        .param("swapped", swapped);
    let ng = operator_norm(&g)?;
    let c_ah = ng.powf(r - 1.0);
    let c_thm = nb.powf(r - 1.0);
    let c_mid = (na.powf(1.0 - alpha) * nb.powf(alpha)).powf(r - 1.0);
    out.value("||A||", na)
        .value("||B||", nb)
        .value("||A#B||^(r-1)", c_ah)
        .value("(||A||#||B||)^(r-1)", c_mid)
        .value("||B||^(r-1)", c_thm);
    out.loewner("A^r # B^r <= ||A#B||^(r-1) A#B", &gr, &g.scale(c_ah), tol)?;
    out.loewner("A^r # B^r <= ||B||^(r-1) A#B", &gr, &g.scale(c_thm), tol)?;
    out.scalar("||A#B||^(r-1) <= ||B||^(r-1)", c_ah, c_thm, tol);
    Ok(out)
}

/// `A σ_h B <= I` implies `f^k(A) σ_h f^k(B) <= I` for `k = 1..n_iter`, where
/// `f(x) = x g(x)` and `f^k` is the k-fold composition; the reversed
/// hypothesis `A σ_h B >= I` is used when the pair conditions hold reversed.
pub fn check_contraction_implication(
    pair: &FunctionPair,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    n_iter: usize,
    tol: f64,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("contraction_implication", "contraction under f(x) = x g(x)");
    if n_iter == 0 {
        return Err(Error::InvalidInput("n_iter must be at least 1".into()));
    }
    ensure_positive_definite(a, tol)?;
    ensure_positive_definite(b, tol)?;
    let conditions = check_pair_conditions(pair, &default_pair_grid(pair))?;
    let pair_dir = conditions.direction();
    out.param("pair", pair.name())
        .param("dim", a.dim())
        .param("pair_direction", format!("{pair_dir:?}"))
        .param("n_iter", n_iter);
    for c in &conditions.conditions {
        out.value(&format!("max violation {}", &c.label[..c.label.find(')').map_or(0, |i| i + 1)]), c.max_violation);
    }
    if pair_dir == PairDirection::Mixed {
        out.not_applicable = Some("pair conditions fail in both directions".into());
        return Ok(out);
    }
    let sigma = pair.mean()?;
    let n = a.dim();
    let id = HermitianMatrix::identity(n);
    let g = sigma.apply_detailed(a, b, tol)?.value;
    let forward_ok = matches!(pair_dir, PairDirection::Equality | PairDirection::AsStated)
        && crate::linalg::loewner_leq(&g, &id, tol)?.pass;
    let reverse_ok = matches!(pair_dir, PairDirection::Equality | PairDirection::Reversed)
        && crate::linalg::loewner_leq(&id, &g, tol)?.pass;
    let dir = if forward_ok {
        Direction::Forward
    } else if reverse_ok {
        Direction::Reversed
    } else {
        out.not_applicable = Some("hypothesis A σ B <= I (or >= I) does not hold".into());
        return Ok(out);
    };
    out.param("direction", format!("{dir:?}"));
    let (rel, hyp) = match dir {
        Direction::Forward => ("<=", (&g, &id)),
        Direction::Reversed => (">=", (&id, &g)),
    };
    out.loewner(format!("AσB {rel} I"), hyp.0, hyp.1, tol)?;
    let f = pair.f();
    for k in 1..=n_iter {
        let fk = iterate(&f, k)?;
        let fa = apply_clamped(&fk, a, tol)?;
        let fb = apply_clamped(&fk, b, tol)?;
        let v = sigma.apply_detailed(&fa, &fb, tol)?.value;
        let desc = format!("f^{k}(A) σ f^{k}(B) {rel} I");
        match dir {
            Direction::Forward => out.loewner(desc, &v, &id, tol)?,
            Direction::Reversed => out.loewner(desc, &id, &v, tol)?,
        }
    }
    Ok(out)
}
