//! Determinant inequalities: Minkowski, its `f`-generalization, the convex
//! combination bound under a spectral gap, and the reverse Minkowski bound.

use serde::{Deserialize, Serialize};

use super::{apply_clamped, CheckOutcome, Direction, LinkStatus};
use crate::error::{Error, Result};
use crate::functions::ScalarFunction;
use crate::linalg::{det_psd, det_root, eigh, ensure_positive_definite, spectral_bounds, HermitianMatrix};

/// Relative slack a spectral gap must exceed to count as strict.
const GAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapCondition {
    /// `lambda_min(A) - lambda_max(B)`.
    pub below_a: f64,
    /// `lambda_min(B) - lambda_max(A)`.
    pub above_a: f64,
    pub scale: f64,
}

impl GapCondition {
    /// Every eigenvalue of `B` lies strictly below every eigenvalue of `A`.
    pub fn holds_below(&self) -> bool {
        self.below_a >= GAP_TOL * self.scale
    }

    /// Every eigenvalue of `B` lies strictly above every eigenvalue of `A`.
    pub fn holds_above(&self) -> bool {
        self.above_a >= GAP_TOL * self.scale
    }

    pub fn holds(&self) -> bool {
        self.holds_below() || self.holds_above()
    }
}

pub fn gap_condition(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<GapCondition> {
    let sa = eigh(a)?;
    let sb = eigh(b)?;
    let scale = 1.0 + [sa.max(), sa.min(), sb.max(), sb.min()].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(GapCondition {
        below_a: sa.min() - sb.max(),
        above_a: sb.min() - sa.max(),
        scale,
    })
}

/// Scalar links on `n`-th roots of determinants. `alpha` weights the convex
/// combination `det(αA + (1-α)B) <= α det A + (1-α) det B`.
pub fn check_determinant_suite(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
    tol: f64,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("determinant_suite", "determinant inequalities");
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidInput(format!("alpha = {alpha} outside (0, 1)")));
    }
    let dir = Direction::of(f)?;
    if !f.fixes_zero() {
        return Err(Error::Hypothesis(format!("`{}` does not fix zero", f.name())));
    }
    ensure_positive_definite(a, tol)?;
    ensure_positive_definite(b, tol)?;
    let n = a.dim();
    let (m, big_m) = spectral_bounds(a, b)?;
    let gap = gap_condition(a, b)?;
    out.param("function", f.name())
        .param("dim", n)
        .param("alpha", alpha)
        .param("gap_below_a", gap.holds_below())
        .param("gap_above_a", gap.holds_above());
    out.value("m", m).value("M", big_m);

    let sum = a.add(b);
    let (da, db, ds) = (det_root(a, tol)?, det_root(b, tol)?, det_root(&sum, tol)?);
    let fa = apply_clamped(f, a, tol)?;
    let fb = apply_clamped(f, b, tol)?;
    let (dfa, dfb, dfs) = (det_root(&fa, tol)?, det_root(&fb, tol)?, det_root(&fa.add(&fb), tol)?);
    let cm = f.eval(m) / m;
    let c_big = f.eval(big_m) / big_m;
    out.value("f(m)/m", cm).value("f(M)/M", c_big);
    out.value("det(A)^(1/n)", da)
        .value("det(B)^(1/n)", db)
        .value("det(A+B)^(1/n)", ds)
        .value("det(f(A)+f(B))^(1/n)", dfs);

    out.scalar("det(A)^(1/n) + det(B)^(1/n) <= det(A+B)^(1/n)", da + db, ds, tol);

    let beta = 1.0 - alpha;
    let convex_lhs = det_psd(&a.scale(alpha).add(&b.scale(beta)), tol)?;
    let convex_rhs = alpha * det_psd(a, tol)? + beta * det_psd(b, tol)?;
    let desc = "det(αA+βB) <= α det A + β det B";
    if gap.holds() {
        out.scalar(desc, convex_lhs, convex_rhs, tol);
    } else {
        out.skipped(desc, LinkStatus::NotApplicable);
    }

    match dir {
        Direction::Forward => {
            out.scalar(
                "(i) det(f(A))^(1/n) + det(f(B))^(1/n) <= (f(M)/M) det(A+B)^(1/n)",
                dfa + dfb,
                c_big * ds,
                tol,
            );
            out.scalar(
                "(ii) (f(m)/m)(det(A)^(1/n) + det(B)^(1/n)) <= det(f(A)+f(B))^(1/n)",
                cm * (da + db),
                dfs,
                tol,
            );
        }
        Direction::Reversed => {
            out.scalar(
                "(iii) det(f(A))^(1/n) + det(f(B))^(1/n) <= (f(m)/m) det(A+B)^(1/n)",
                dfa + dfb,
                cm * ds,
                tol,
            );
            out.scalar(
                "(iv) (f(M)/M)(det(A)^(1/n) + det(B)^(1/n)) <= det(f(A)+f(B))^(1/n)",
                c_big * (da + db),
                dfs,
                tol,
            );
        }
    }

    let reverse_rhs = 2f64.powf(1.0 - 1.0 / n as f64) * c_big * (da + db);
    out.value("reverse bound", reverse_rhs);
    let desc = "det(f(A)+f(B))^(1/n) <= 2^(1-1/n)(f(M)/M)(det(A)^(1/n) + det(B)^(1/n))";
    if gap.holds() && dir == Direction::Forward {
        out.scalar(desc, dfs, reverse_rhs, tol);
    } else {
        out.skipped(desc, LinkStatus::NotApplicable);
    }
    Ok(out)
}
