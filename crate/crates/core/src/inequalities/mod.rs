//! One checker per inequality family. Each evaluates both sides of every
//! link, records the margin (`lambda_min(rhs - lhs)` for matrix links,
//! `rhs - lhs` for scalar links) and the pass/fail verdict at the supplied
//! relative tolerance.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{Convexity, ScalarFunction};
use crate::linalg::{loewner_leq, ComparisonResult, HermitianMatrix};

mod chains;
mod determinant;
mod normal;
mod power;

pub use chains::{
    check_chord_bounds, check_eig_prod_norm, check_inverse_function, check_log_example, check_main_chain,
    check_mean_difference_norm, check_subadditivity_refinement,
};
pub use determinant::{check_determinant_suite, gap_condition, GapCondition};
pub use normal::{
    check_normal_chain, check_normal_counterexample, check_normal_triangle, check_normal_upper_chain,
    normal_fixture,
};
pub use power::{check_ando_hiai_comparison, check_contraction_implication, check_power_mean_bounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkStatus {
    Checked,
    /// A side carries an infinite coefficient; the link says nothing.
    Vacuous,
    /// A hypothesis of the link fails on this instance.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub description: String,
    pub margin: f64,
    pub scale: f64,
    pub pass: bool,
    pub status: LinkStatus,
}

impl Link {
    pub fn is_failure(&self) -> bool {
        self.status == LinkStatus::Checked && !self.pass
    }
}

/// Result of one checker run on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check_name: String,
    /// Which inequality the links instantiate.
    pub anchor: String,
    pub links: Vec<Link>,
    pub params: BTreeMap<String, String>,
    pub values: BTreeMap<String, f64>,
    /// Reason the whole check was skipped, if it was.
    pub not_applicable: Option<String>,
}

impl CheckOutcome {
    pub fn new(check_name: &str, anchor: &str) -> Self {
        Self {
            check_name: check_name.to_string(),
            anchor: anchor.to_string(),
            links: Vec::new(),
            params: BTreeMap::new(),
            values: BTreeMap::new(),
            not_applicable: None,
        }
    }

    /// `true` when no checked link failed.
    pub fn pass(&self) -> bool {
        !self.links.iter().any(Link::is_failure)
    }

    pub fn checked_links(&self) -> impl Iterator<Item = &Link> {
        self.links.iter().filter(|l| l.status == LinkStatus::Checked)
    }

    pub fn worst_margin(&self) -> Option<f64> {
        self.checked_links().map(|l| l.margin).reduce(f64::min)
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Records a value; non-finite values are dropped so reports stay valid JSON.
    pub fn value(&mut self, key: &str, v: f64) -> &mut Self {
        if v.is_finite() {
            self.values.insert(key.to_string(), v);
        }
        self
    }

    fn push(&mut self, description: String, cmp: ComparisonResult) {
        self.links.push(Link {
            description,
            margin: cmp.margin,
            scale: cmp.scale,
            pass: cmp.pass,
            status: LinkStatus::Checked,
        });
    }

    /// Matrix link `x <= y`.
    pub fn loewner(&mut self, description: impl Into<String>, x: &HermitianMatrix, y: &HermitianMatrix, tol: f64) -> Result<()> {
        let cmp = loewner_leq(x, y, tol)?;
        self.push(description.into(), cmp);
        Ok(())
    }

    /// Scalar link `x <= y`.
    pub fn scalar(&mut self, description: impl Into<String>, x: f64, y: f64, tol: f64) {
        self.push(description.into(), ComparisonResult::scalar(x, y, tol));
    }

    /// Strict scalar link `x > y`: margin `x - y` must exceed `tol (1 + |x|)`.
    pub fn exceeds(&mut self, description: impl Into<String>, x: f64, y: f64, tol: f64) {
        let scale = 1.0 + x.abs();
        let margin = x - y;
        self.links.push(Link {
            description: description.into(),
            margin,
            scale,
            pass: margin > tol * scale,
            status: LinkStatus::Checked,
        });
    }

    pub fn skipped(&mut self, description: impl Into<String>, status: LinkStatus) {
        self.links.push(Link {
            description: description.into(),
            margin: 0.0,
            scale: 1.0,
            pass: true,
            status,
        });
    }
}

/// Whether a chain is asserted as written (`<=`) or reversed (`>=`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Reversed,
}

impl Direction {
    pub fn of(f: &ScalarFunction) -> Result<Self> {
        match f.convexity() {
            Convexity::Convex => Ok(Direction::Forward),
            Convexity::Concave => Ok(Direction::Reversed),
            Convexity::Neither => Err(Error::Hypothesis(format!(
                "`{}` is neither convex nor concave",
                f.name()
            ))),
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Direction::Forward => "<=",
            Direction::Reversed => ">=",
        }
    }
}

/// A term of a chain; `None` marks an infinite coefficient.
pub(crate) struct Term<T> {
    pub label: String,
    pub value: Option<T>,
}

impl<T> Term<T> {
    pub fn new(label: impl Into<String>, value: Option<T>) -> Self {
        Self {
            label: label.into(),
            value,
        }
    }
}

/// Records the consecutive links of `t0 (<=|>=) t1 (<=|>=) ...`.
pub(crate) fn matrix_chain(
    out: &mut CheckOutcome,
    prefix: &str,
    terms: &[Term<HermitianMatrix>],
    dir: Direction,
    tol: f64,
) -> Result<()> {
    for w in terms.windows(2) {
        let desc = format!("{prefix}{} {} {}", w[0].label, dir.symbol(), w[1].label);
        match (&w[0].value, &w[1].value) {
            (Some(lo), Some(hi)) => match dir {
                Direction::Forward => out.loewner(desc, lo, hi, tol)?,
                Direction::Reversed => out.loewner(desc, hi, lo, tol)?,
            },
            _ => out.skipped(desc, LinkStatus::Vacuous),
        }
    }
    Ok(())
}

pub(crate) fn scalar_chain(out: &mut CheckOutcome, prefix: &str, terms: &[Term<f64>], dir: Direction, tol: f64) {
    for w in terms.windows(2) {
        let desc = format!("{prefix}{} {} {}", w[0].label, dir.symbol(), w[1].label);
        match (w[0].value, w[1].value) {
            (Some(lo), Some(hi)) => match dir {
                Direction::Forward => out.scalar(desc, lo, hi, tol),
                Direction::Reversed => out.scalar(desc, hi, lo, tol),
            },
            _ => out.skipped(desc, LinkStatus::Vacuous),
        }
    }
}

/// `c * x`, or `None` when the coefficient is infinite.
pub(crate) fn scaled(c: f64, x: &HermitianMatrix) -> Option<HermitianMatrix> {
    c.is_finite().then(|| x.scale(c))
}

pub(crate) fn times(c: f64, x: f64) -> Option<f64> {
    c.is_finite().then_some(c * x)
}

/// Default norm list when a caller passes none: the operator norm.
pub(crate) fn norms_or_default(norms: &[crate::linalg::NormKind]) -> Vec<crate::linalg::NormKind> {
    if norms.is_empty() {
        vec![crate::linalg::NormKind::Operator]
    } else {
        norms.to_vec()
    }
}

/// `f(X)` for a positive semidefinite `X`, clamping round-off negatives to 0
/// when 0 is in `f`'s domain.
pub(crate) fn apply_clamped(f: &ScalarFunction, x: &HermitianMatrix, tol: f64) -> Result<HermitianMatrix> {
    let s = crate::linalg::eigh(x)?;
    let scale = 1.0 + s.max().abs().max(s.min().abs());
    let zero_ok = f.domain().contains(0.0);
    let values = s
        .values
        .iter()
        .map(|&v| {
            let v = if zero_ok && v < 0.0 && v >= -tol * scale { 0.0 } else { v };
            f.try_eval(v)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(s.rebuild(&values))
}
