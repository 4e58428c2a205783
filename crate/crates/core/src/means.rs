//! Kubo-Ando matrix means through their representing functions, and the
//! generalized perspective used for the relative operator entropy.
//!
//! For positive definite `A` every mean is evaluated by the congruence
//! `A σ B = A^{1/2} h(A^{-1/2} B A^{-1/2}) A^{1/2}`, with `A^{±1/2}` taken
//! from one eigendecomposition of `A`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{self, format_ratio, log_spaced, parse_ratio, Domain, ScalarFunction};
use crate::linalg::{eigh, ComplexMatrix, HermitianMatrix, Spectrum, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeanKind {
    Arithmetic,
    Harmonic,
    Geometric,
    Custom,
}

/// A matrix mean identified by its representing function `h` (`h(1) = 1`).
#[derive(Debug, Clone)]
pub struct MatrixMean {
    name: String,
    kind: MeanKind,
    weight: Option<f64>,
    h: ScalarFunction,
}

/// A mean evaluation together with the continuity shift applied, if any.
#[derive(Debug, Clone)]
pub struct MeanValue {
    pub value: HermitianMatrix,
    /// `eps` such that `(A + eps I) σ (B + eps I)` was evaluated instead of `A σ B`.
    pub regularization: Option<f64>,
}

fn check_weight(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidMean {
            name: format!("weight {t}"),
            reason: "weight must lie in [0, 1]".into(),
        });
    }
    Ok(())
}

impl MatrixMean {
    /// `A ∇_t B = (1-t)A + tB`, `h(x) = (1-t) + t x`.
    pub fn arithmetic(t: f64) -> Result<Self> {
        check_weight(t)?;
        let h = ScalarFunction::new(
            format!("arith_h:{}", format_ratio(t)),
            Domain::closed_from(0.0),
            move |x| (1.0 - t) + t * x,
            move |_| t,
        );
        Ok(Self {
            name: format!("arithmetic:{}", format_ratio(t)),
            kind: MeanKind::Arithmetic,
            weight: Some(t),
            h,
        })
    }

    /// `A !_t B = ((1-t)A^{-1} + tB^{-1})^{-1}`, `h(x) = x / ((1-t)x + t)`.
    pub fn harmonic(t: f64) -> Result<Self> {
        check_weight(t)?;
        let h = ScalarFunction::new(
            format!("harm_h:{}", format_ratio(t)),
            Domain::closed_from(0.0),
            move |x| {
                let d = (1.0 - t) * x + t;
                if d == 0.0 {
                    0.0
                } else {
                    x / d
                }
            },
            move |x| {
                let d = (1.0 - t) * x + t;
                t / (d * d)
            },
        );
        Ok(Self {
            name: format!("harmonic:{}", format_ratio(t)),
            kind: MeanKind::Harmonic,
            weight: Some(t),
            h,
        })
    }

    /// `A #_t B = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}`, `h(x) = x^t`.
    pub fn geometric(t: f64) -> Result<Self> {
        check_weight(t)?;
        let h = functions::power(t).with_name(format!("geom_h:{}", format_ratio(t)));
        Ok(Self {
            name: format!("geometric:{}", format_ratio(t)),
            kind: MeanKind::Geometric,
            weight: Some(t),
            h,
        })
    }

    /// A mean from an arbitrary representing function, validated on a grid.
    pub fn custom(name: impl Into<String>, h: ScalarFunction) -> Result<Self> {
        let name = name.into();
        validate_representing_function(&name, &h)?;
        Ok(Self {
            name,
            kind: MeanKind::Custom,
            weight: None,
            h,
        })
    }

    /// Resolves `arithmetic:t`, `harmonic:t` or `geometric:t` (`t` may be a fraction).
    pub fn by_name(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownName {
            kind: "mean",
            name: name.to_string(),
        };
        let (kind, arg) = name.split_once(':').ok_or_else(unknown)?;
        let t = parse_ratio(arg).ok_or_else(unknown)?;
        match kind {
            "arithmetic" => Self::arithmetic(t),
            "harmonic" => Self::harmonic(t),
            "geometric" => Self::geometric(t),
            _ => Err(unknown()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> MeanKind {
        self.kind
    }

    pub fn weight(&self) -> Option<f64> {
        self.weight
    }

    pub fn representing_function(&self) -> &ScalarFunction {
        &self.h
    }

    /// Scalar mean `a σ b = a h(b / a)` for `a > 0`.
    pub fn scalar(&self, a: f64, b: f64) -> f64 {
        a * self.h.eval(b / a)
    }

    pub fn apply(&self, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
        Ok(self.apply_detailed(a, b, DEFAULT_TOL)?.value)
    }

    /// Evaluates `A σ B`. `B` must be positive semidefinite; if `A` is not
    /// positive definite, `(A + eps I) σ (B + eps I)` is evaluated with
    /// `eps = 1e-8 (1 + ||A|| + ||B||)` and `eps` is reported.
    pub fn apply_detailed(&self, a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<MeanValue> {
        a.as_matrix().ensure_same_dim(b.as_matrix())?;
        let sa = eigh(a)?;
        let sb = eigh(b)?;
        let norm_a = sa.max().abs().max(sa.min().abs());
        let norm_b = sb.max().abs().max(sb.min().abs());
        if sb.min() < -tol * (1.0 + norm_b) {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: sb.min(),
            });
        }
        if sa.min() < -tol * (1.0 + norm_a) {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: sa.min(),
            });
        }
        if sa.min() > tol * (1.0 + norm_a) {
            let value = congruence_eval(&sa, b, |x| self.h.try_eval(x), true, tol)?;
            return Ok(MeanValue {
                value,
                regularization: None,
            });
        }
        let eps = 1e-8 * (1.0 + norm_a + norm_b);
        let a_eps = a.affine(1.0, eps);
        let b_eps = b.affine(1.0, eps);
        let value = congruence_eval(&eigh(&a_eps)?, &b_eps, |x| self.h.try_eval(x), true, tol)?;
        Ok(MeanValue {
            value,
            regularization: Some(eps),
        })
    }
}

/// `A^{1/2} g(A^{-1/2} B A^{-1/2}) A^{1/2}` from the spectrum of `A`.
///
/// With `clamp_psd`, small negative eigenvalues of the middle term (round-off
/// from a semidefinite `B`) are set to zero.
fn congruence_eval(
    sa: &Spectrum,
    b: &HermitianMatrix,
    g: impl Fn(f64) -> Result<f64>,
    clamp_psd: bool,
    tol: f64,
) -> Result<HermitianMatrix> {
    let a_half: ComplexMatrix = sa.map(f64::sqrt).into_matrix();
    let a_inv_half: ComplexMatrix = sa.map(|x| 1.0 / x.sqrt()).into_matrix();
    let middle = HermitianMatrix::from_matrix(&(&(&a_inv_half * b.as_matrix()) * &a_inv_half));
    let sm = eigh(&middle)?;
    let mid_scale = 1.0 + sm.max().abs().max(sm.min().abs());
    let values = sm
        .values
        .iter()
        .map(|&x| {
            let x = if clamp_psd && x < 0.0 && x >= -tol * mid_scale {
                0.0
            } else {
                x
            };
            g(x)
        })
        .collect::<Result<Vec<f64>>>()?;
    let h_mid = sm.rebuild(&values);
    Ok(HermitianMatrix::from_matrix(
        &(&(&a_half * h_mid.as_matrix()) * &a_half),
    ))
}

/// Checks `h(1) = 1`, positivity and monotonicity on 512 log-spaced points of `(1e-3, 1e3)`.
pub fn validate_representing_function(name: &str, h: &ScalarFunction) -> Result<()> {
    let bad = |reason: String| Error::InvalidMean {
        name: name.to_string(),
        reason,
    };
    let at_one = h.try_eval(1.0)?;
    if (at_one - 1.0).abs() > 1e-12 {
        return Err(bad(format!("h(1) = {at_one}, expected 1")));
    }
    let grid: Vec<f64> = log_spaced(1e-3, 1e3, 512, false)
        .into_iter()
        .filter(|&x| h.domain().contains(x))
        .collect();
    let mut prev = f64::NEG_INFINITY;
    for x in grid {
        let y = h.eval(x);
        if !(y > 0.0) {
            return Err(bad(format!("h({x}) = {y} is not positive")));
        }
        if y < prev - 1e-12 * (1.0 + prev.abs()) {
            return Err(bad(format!("h decreases near x = {x}")));
        }
        prev = y;
    }
    Ok(())
}

/// `∇_t`, `!_t` and `#_t` for `t` in {1/4, 1/2, 3/4}.
pub fn mean_catalog() -> Vec<MatrixMean> {
    let weights = [0.25, 0.5, 0.75];
    let mut v = Vec::new();
    for ctor in [MatrixMean::arithmetic, MatrixMean::harmonic, MatrixMean::geometric] {
        for &t in &weights {
            v.push(ctor(t).expect("catalog weights are valid"));
        }
    }
    v
}

/// Name resolution for built-in means plus registered custom means (`custom:<name>`).
#[derive(Debug, Clone, Default)]
pub struct MeanRegistry {
    custom: BTreeMap<String, MatrixMean>,
}

impl MeanRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, name: &str, h: ScalarFunction) -> Result<()> {
        let mean = MatrixMean::custom(format!("custom:{name}"), h)?;
        self.custom.insert(name.to_string(), mean);
        Ok(())
    }

    pub fn resolve(&self, name: &str) -> Result<MatrixMean> {
        if let Some(key) = name.strip_prefix("custom:") {
            return self.custom.get(key).cloned().ok_or_else(|| Error::UnknownName {
                kind: "custom mean",
                name: name.to_string(),
            });
        }
        MatrixMean::by_name(name)
    }
}

/// Generalized perspective `A^{1/2} phi(A^{-1/2} B A^{-1/2}) A^{1/2}`;
/// `phi` carries no positivity or normalization requirement.
#[derive(Debug, Clone)]
pub struct Perspective {
    pub phi: ScalarFunction,
}

impl Perspective {
    pub fn new(phi: ScalarFunction) -> Self {
        Self { phi }
    }

    /// The relative operator entropy `S(A|B)`, i.e. `phi = log`.
    pub fn relative_entropy() -> Self {
        Self::new(functions::log())
    }

    /// Requires positive definite `A`.
    pub fn apply(&self, a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<HermitianMatrix> {
        a.as_matrix().ensure_same_dim(b.as_matrix())?;
        let sa = crate::linalg::ensure_positive_definite(a, tol)?;
        congruence_eval(&sa, b, |x| self.phi.try_eval(x), false, tol)
    }
}

/// `S(A|B) = A^{1/2} log(A^{-1/2} B A^{-1/2}) A^{1/2}`.
pub fn relative_entropy(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<HermitianMatrix> {
    Perspective::relative_entropy().apply(a, b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::identity;

    fn diag(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diag(v)
    }

    fn max_diff(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
        (&a.as_matrix().clone() - b.as_matrix()).max_abs()
    }

    #[test]
    fn identity_fixed_by_every_mean() {
        let i = HermitianMatrix::identity(3);
        for m in mean_catalog() {
            assert!(max_diff(&m.apply(&i, &i).unwrap(), &i) < 1e-14, "{}", m.name());
        }
    }

    #[test]
    fn commuting_closed_forms() {
        let a = diag(&[1.0, 4.0]);
        let b = diag(&[2.0, 3.0]);
        let g = MatrixMean::geometric(0.5).unwrap().apply(&a, &b).unwrap();
        assert!(max_diff(&g, &diag(&[2f64.sqrt(), 12f64.sqrt()])) < 1e-14);
        let h = MatrixMean::harmonic(0.5).unwrap().apply(&a, &b).unwrap();
        assert!(max_diff(&h, &diag(&[4.0 / 3.0, 24.0 / 7.0])) < 1e-14);
        let ar = MatrixMean::arithmetic(0.25).unwrap().apply(&a, &b).unwrap();
        assert!(max_diff(&ar, &diag(&[1.25, 3.75])) < 1e-14);
    }

    #[test]
    fn catalog_contents() {
        let cat = mean_catalog();
        assert_eq!(cat.len(), 9);
        let arith = cat.iter().find(|m| m.name() == "arithmetic:1/2").unwrap();
        assert_eq!(arith.representing_function().eval(3.0), 2.0);
        let geo = cat.iter().find(|m| m.name() == "geometric:1/2").unwrap();
        assert_eq!(geo.representing_function().eval(9.0), 3.0);
        for m in &cat {
            assert!((m.representing_function().eval(1.0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn names_and_registry() {
        assert_eq!(MatrixMean::by_name("geometric:0.5").unwrap().name(), "geometric:1/2");
        assert!(MatrixMean::by_name("logarithmic:0.5").is_err());
        assert!(MatrixMean::by_name("arithmetic:1.5").is_err());
        let mut reg = MeanRegistry::new();
        assert!(reg.resolve("custom:sqrt").is_err());
        reg.register("sqrt", functions::power(0.5)).unwrap();
        assert_eq!(reg.resolve("custom:sqrt").unwrap().kind(), MeanKind::Custom);
        // log(1) = 0 violates normalization.
        assert!(reg.register("log", functions::log()).is_err());
    }

    #[test]
    fn singular_first_argument_is_regularized() {
        let m = MatrixMean::geometric(0.5).unwrap();
        let out = m.apply_detailed(&diag(&[0.0, 4.0]), &diag(&[1.0, 1.0]), DEFAULT_TOL).unwrap();
        let eps = out.regularization.expect("regularization applied");
        assert!((eps - 1e-8 * 6.0).abs() < 1e-20);
        assert!((out.value[(1, 1)].re - 2.0).abs() < 1e-6);
        assert!(out.value[(0, 0)].re.abs() < 1e-3);
    }

    #[test]
    fn negative_second_argument_rejected() {
        let m = MatrixMean::arithmetic(0.5).unwrap();
        assert!(matches!(
            m.apply(&diag(&[1.0, 1.0]), &diag(&[1.0, -0.5])),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn entropy_examples() {
        let a = diag(&[2.0, 3.0]);
        let s = relative_entropy(&a, &a, DEFAULT_TOL).unwrap();
        assert!(s.as_matrix().max_abs() < 1e-14);
        let e = std::f64::consts::E;
        let s = relative_entropy(&HermitianMatrix::identity(2), &diag(&[e, e * e]), DEFAULT_TOL).unwrap();
        assert!(max_diff(&s, &diag(&[1.0, 2.0])) < 1e-14);
        let p = Perspective::new(identity()).apply(&a, &diag(&[5.0, 7.0]), DEFAULT_TOL).unwrap();
        assert!(max_diff(&p, &diag(&[5.0, 7.0])) < 1e-14);
    }

    #[test]
    fn perspective_domain_violation() {
        let p = Perspective::relative_entropy();
        let r = p.apply(&HermitianMatrix::identity(2), &diag(&[1.0, -1.0]), DEFAULT_TOL);
        assert!(matches!(r, Err(Error::DomainViolation { .. })));
    }
}
