//! Pairs `(g, h)` of positive matrix monotone functions and the three
//! pointwise conditions under which `A σ_h B <= I` propagates to
//! `f^k(A) σ_h f^k(B) <= I` with `f(x) = x g(x)`:
//!
//! * (i)   `g(1/h(x)) <= 1/h(g(x))`
//! * (ii)  `g(x/h(x)) <= g(x)/h(g(x))`
//! * (iii) `h(x g(x)) <= h(x) h(g(x))`
//!
//! Matrix monotonicity of `g` and `h` is taken from the catalog, not verified.

use serde::{Deserialize, Serialize};

use super::{log_spaced, Convexity, ScalarFunction};
use crate::error::{Error, Result};
use crate::means::MatrixMean;

/// Relative slack allowed before a pointwise comparison counts as violated.
const PAIR_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct FunctionPair {
    pub g: ScalarFunction,
    pub h: ScalarFunction,
}

impl FunctionPair {
    pub fn new(g: ScalarFunction, h: ScalarFunction) -> Self {
        Self { g, h }
    }

    /// `(x^p, x^q)`.
    pub fn powers(p: f64, q: f64) -> Self {
        Self::new(super::power(p), super::power(q))
    }

    /// `(log x, x / log x)`.
    pub fn log_pair() -> Self {
        Self::new(super::log(), super::x_over_log())
    }

    pub fn name(&self) -> String {
        format!("({}, {})", self.g.name(), self.h.name())
    }

    /// `f(x) = x g(x)`.
    pub fn f(&self) -> ScalarFunction {
        let g = self.g.clone();
        let g2 = self.g.clone();
        let fixes_zero = self.g.domain().contains(0.0) && self.g.eval(0.0).is_finite();
        ScalarFunction::new(
            format!("x*{}", self.g.name()),
            self.g.domain(),
            move |x| if x == 0.0 { 0.0 } else { x * g.eval(x) },
            move |x| g2.eval(x) + if x == 0.0 { 0.0 } else { x * g2.deriv(x) },
        )
        .with_convexity(Convexity::Neither)
        .with_fixes_zero(fixes_zero)
    }

    /// The mean `σ_h` represented by `h`.
    pub fn mean(&self) -> Result<MatrixMean> {
        MatrixMean::custom(format!("sigma[{}]", self.h.name()), self.h.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairDirection {
    /// Both directions hold: equality on the grid.
    Equality,
    AsStated,
    Reversed,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub label: String,
    /// Largest relative excess `(lhs - rhs) / (1 + |rhs|)`; positive values violate the stated form.
    pub max_violation: f64,
    /// Largest relative excess `(rhs - lhs) / (1 + |rhs|)`; positive values violate the reversed form.
    pub max_reverse_violation: f64,
    /// Grid point where `max_violation` is attained.
    pub worst_point: f64,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.max_violation <= PAIR_TOL
    }

    pub fn holds_reversed(&self) -> bool {
        self.max_reverse_violation <= PAIR_TOL
    }

    pub fn direction(&self) -> PairDirection {
        match (self.holds(), self.holds_reversed()) {
            (true, true) => PairDirection::Equality,
            (true, false) => PairDirection::AsStated,
            (false, true) => PairDirection::Reversed,
            (false, false) => PairDirection::Mixed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairConditions {
    pub conditions: Vec<ConditionReport>,
    pub grid_len: usize,
}

impl PairConditions {
    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(ConditionReport::holds)
    }

    pub fn all_reversed(&self) -> bool {
        self.conditions.iter().all(ConditionReport::holds_reversed)
    }

    pub fn direction(&self) -> PairDirection {
        match (self.all_hold(), self.all_reversed()) {
            (true, true) => PairDirection::Equality,
            (true, false) => PairDirection::AsStated,
            (false, true) => PairDirection::Reversed,
            (false, false) => PairDirection::Mixed,
        }
    }
}

/// Evaluates (i)-(iii) at every grid point.
pub fn check_pair_conditions(pair: &FunctionPair, grid: &[f64]) -> Result<PairConditions> {
    let g = &pair.g;
    let h = &pair.h;
    let labels = [
        "(i) g(1/h(x)) <= 1/h(g(x))",
        "(ii) g(x/h(x)) <= g(x)/h(g(x))",
        "(iii) h(x g(x)) <= h(x) h(g(x))",
    ];
    let mut reports: Vec<ConditionReport> = labels
        .iter()
        .map(|l| ConditionReport {
            label: l.to_string(),
            max_violation: f64::NEG_INFINITY,
            max_reverse_violation: f64::NEG_INFINITY,
            worst_point: f64::NAN,
        })
        .collect();

    for &x in grid {
        let gx = g.try_eval(x)?;
        let hx = h.try_eval(x)?;
        if !(gx > 0.0) || !(hx > 0.0) {
            return Err(Error::Hypothesis(format!(
                "pair {} is not positive at x = {x} (g = {gx}, h = {hx})",
                pair.name()
            )));
        }
        let hgx = h.try_eval(gx)?;
        let sides = [
            (g.try_eval(1.0 / hx)?, 1.0 / hgx),
            (g.try_eval(x / hx)?, gx / hgx),
            (h.try_eval(x * gx)?, hx * hgx),
        ];
        for (report, (lhs, rhs)) in reports.iter_mut().zip(sides) {
            if !lhs.is_finite() || !rhs.is_finite() {
                return Err(Error::Hypothesis(format!(
                    "non-finite value in {} at x = {x}",
                    report.label
                )));
            }
            let excess = (lhs - rhs) / (1.0 + rhs.abs());
            if excess > report.max_violation {
                report.max_violation = excess;
                report.worst_point = x;
            }
            report.max_reverse_violation = report.max_reverse_violation.max(-excess);
        }
    }
    Ok(PairConditions {
        conditions: reports,
        grid_len: grid.len(),
    })
}

/// 256 log-spaced points on `(1e-2, 1e2)`, restricted to where every
/// composition in (i)-(iii) is defined.
pub fn default_pair_grid(pair: &FunctionPair) -> Vec<f64> {
    let (g, h) = (&pair.g, &pair.h);
    log_spaced(1e-2, 1e2, 256, false)
        .into_iter()
        .filter(|&x| {
            if !g.domain().contains(x) || !h.domain().contains(x) {
                return false;
            }
            let (gx, hx) = (g.eval(x), h.eval(x));
            hx > 0.0
                && gx > 0.0
                && g.domain().contains(1.0 / hx)
                && g.domain().contains(x / hx)
                && h.domain().contains(gx)
                && h.domain().contains(x * gx)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_root_pair_is_an_equality() {
        let pair = FunctionPair::powers(0.5, 0.5);
        let grid = default_pair_grid(&pair);
        assert_eq!(grid.len(), 256);
        let r = check_pair_conditions(&pair, &grid).unwrap();
        assert_eq!(r.direction(), PairDirection::Equality);
        for c in &r.conditions {
            assert!(c.max_violation.abs() < 1e-13, "{}: {}", c.label, c.max_violation);
        }
    }

    #[test]
    fn product_function() {
        let f = FunctionPair::powers(0.5, 0.5).f();
        assert!((f.eval(4.0) - 8.0).abs() < 1e-15);
        assert!((f.deriv(4.0) - 1.5 * 2.0).abs() < 1e-15);
        assert!(f.fixes_zero());
    }

    #[test]
    fn domain_violation_reported() {
        let pair = FunctionPair::log_pair();
        // x = 2 gives g(x) = log 2 < 1, outside the domain of x / log x.
        assert!(matches!(
            check_pair_conditions(&pair, &[2.0]),
            Err(Error::DomainViolation { .. })
        ));
    }

    #[test]
    fn log_pair_first_two_conditions() {
        let pair = FunctionPair::log_pair();
        let grid = log_spaced(std::f64::consts::E, 100.0, 256, true);
        let r = check_pair_conditions(&pair, &grid).unwrap();
        assert!(r.conditions[0].holds());
        assert_eq!(r.conditions[1].direction(), PairDirection::Equality);
    }
}
