//! Scalar functions with derivatives, convexity class and optional inverse.
//!
//! Functions are selected by name: `identity`, `power:r` (`r` may be a
//! fraction such as `2/3`), `sqrt`, `log1p`, `expm1`, `mobius` (`x/(1+x)`),
//! and the two building blocks used by the contraction pairs, `log` and
//! `x/log`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod pairs;

pub use pairs::{check_pair_conditions, default_pair_grid, ConditionReport, FunctionPair, PairConditions, PairDirection};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convexity {
    Convex,
    Concave,
    Neither,
}

/// A real interval with independently open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Domain {
    pub const REALS: Domain = Domain {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        lo_closed: false,
        hi_closed: false,
    };

    /// `[lo, inf)`
    pub fn closed_from(lo: f64) -> Self {
        Self {
            lo,
            hi: f64::INFINITY,
            lo_closed: true,
            hi_closed: false,
        }
    }

    /// `(lo, inf)`
    pub fn open_from(lo: f64) -> Self {
        Self {
            lo,
            hi: f64::INFINITY,
            lo_closed: false,
            hi_closed: false,
        }
    }

    /// `(-inf, hi)`
    pub fn open_below(hi: f64) -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        if x.is_nan() {
            return false;
        }
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

#[derive(Clone)]
enum Repr {
    Primitive { eval: RealFn, deriv: RealFn },
    Iterate { base: Arc<ScalarFunction>, depth: usize },
}

/// A named real function `f` with `f'`, domain, convexity tag and optional inverse.
///
/// `deriv` may return `+inf` at a domain edge (e.g. `sqrt` at 0).
#[derive(Clone)]
pub struct ScalarFunction {
    name: String,
    repr: Repr,
    domain: Domain,
    convexity: Convexity,
    fixes_zero: bool,
    inverse: Option<Arc<ScalarFunction>>,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("convexity", &self.convexity)
            .field("fixes_zero", &self.fixes_zero)
            .field("inverse", &self.inverse.as_ref().map(|i| i.name.clone()))
            .finish()
    }
}

impl ScalarFunction {
    pub fn new(
        name: impl Into<String>,
        domain: Domain,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            repr: Repr::Primitive {
                eval: Arc::new(eval),
                deriv: Arc::new(deriv),
            },
            domain,
            convexity: Convexity::Neither,
            fixes_zero: false,
            inverse: None,
        }
    }

    pub fn with_convexity(mut self, c: Convexity) -> Self {
        self.convexity = c;
        self
    }

    pub fn with_fixes_zero(mut self, fixes: bool) -> Self {
        self.fixes_zero = fixes;
        self
    }

    pub fn with_inverse(mut self, inverse: ScalarFunction) -> Self {
        self.inverse = Some(Arc::new(inverse));
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn convexity(&self) -> Convexity {
        self.convexity
    }

    pub fn fixes_zero(&self) -> bool {
        self.fixes_zero
    }

    pub fn inverse(&self) -> Option<&ScalarFunction> {
        self.inverse.as_deref()
    }

    /// Evaluates without a domain check.
    pub fn eval(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Primitive { eval, .. } => eval(x),
            Repr::Iterate { base, depth } => (0..*depth).fold(x, |y, _| base.eval(y)),
        }
    }

    /// Evaluates with a domain check at every composition stage.
    pub fn try_eval(&self, x: f64) -> Result<f64> {
        match &self.repr {
            Repr::Primitive { eval, .. } => {
                if !self.domain.contains(x) {
                    return Err(self.domain_error(x, None));
                }
                Ok(eval(x))
            }
            Repr::Iterate { base, depth } => {
                let mut y = x;
                for k in 1..=*depth {
                    if !base.domain.contains(y) {
                        return Err(base.domain_error(y, Some(k)));
                    }
                    y = base.eval(y);
                }
                Ok(y)
            }
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Primitive { deriv, .. } => deriv(x),
            Repr::Iterate { base, depth } => {
                let mut y = x;
                let mut d = 1.0;
                for _ in 0..*depth {
                    d *= base.deriv(y);
                    y = base.eval(y);
                }
                d
            }
        }
    }

    /// `f(x)/x`, with the limit `f'(0)` at `x = 0` for functions fixing zero.
    pub fn slope_from_origin(&self, x: f64) -> f64 {
        if x == 0.0 && self.fixes_zero {
            self.deriv(0.0)
        } else {
            self.eval(x) / x
        }
    }

    fn domain_error(&self, value: f64, depth: Option<usize>) -> Error {
        Error::DomainViolation {
            function: self.name.clone(),
            value,
            domain: self.domain.to_string(),
            depth,
        }
    }

    /// Resolves a function name; see the module docs for the accepted forms.
    pub fn by_name(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownName {
            kind: "function",
            name: name.to_string(),
        };
        match name {
            "identity" => return Ok(identity()),
            "sqrt" => return Ok(sqrt()),
            "log1p" => return Ok(log1p()),
            "expm1" => return Ok(expm1()),
            "mobius" => return Ok(mobius()),
            "log" => return Ok(log()),
            "x/log" => return Ok(x_over_log()),
            _ => {}
        }
        let arg = name.strip_prefix("power:").ok_or_else(unknown)?;
        let r = parse_ratio(arg).ok_or_else(unknown)?;
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidInput(format!("power exponent must be positive, got {r}")));
        }
        Ok(power(r))
    }
}

/// Parses `1.5`, `2` or a fraction like `2/3`.
pub fn parse_ratio(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().ok()?;
            let q: f64 = q.trim().parse().ok()?;
            (q != 0.0).then_some(p / q)
        }
        None => s.trim().parse().ok(),
    }
}

/// Short label for an exponent: small fractions print as `p/q`.
pub fn format_ratio(r: f64) -> String {
    for q in 1..=12u32 {
        let p = r * q as f64;
        if (p - p.round()).abs() < 1e-12 {
            return if q == 1 {
                format!("{}", p.round())
            } else {
                format!("{}/{}", p.round(), q)
            };
        }
    }
    format!("{r}")
}

fn power_base(r: f64) -> ScalarFunction {
    let convexity = if r >= 1.0 {
        Convexity::Convex
    } else {
        Convexity::Concave
    };
    ScalarFunction::new(
        format!("power:{}", format_ratio(r)),
        Domain::closed_from(0.0),
        move |x| x.powf(r),
        move |x| if r == 1.0 { 1.0 } else { r * x.powf(r - 1.0) },
    )
    .with_convexity(convexity)
    .with_fixes_zero(true)
}

/// `x -> x^r` on `[0, inf)`, with inverse `x^{1/r}`.
pub fn power(r: f64) -> ScalarFunction {
    power_base(r).with_inverse(power_base(1.0 / r))
}

pub fn identity() -> ScalarFunction {
    let base = || {
        ScalarFunction::new("identity", Domain::REALS, |x| x, |_| 1.0)
            .with_convexity(Convexity::Convex)
            .with_fixes_zero(true)
    };
    base().with_inverse(base())
}

/// `sqrt` on `[0, inf)` with inverse `x^2`.
pub fn sqrt() -> ScalarFunction {
    power(0.5).with_name("sqrt")
}

fn log1p_base() -> ScalarFunction {
    ScalarFunction::new("log1p", Domain::open_from(-1.0), f64::ln_1p, |x| 1.0 / (1.0 + x))
        .with_convexity(Convexity::Concave)
        .with_fixes_zero(true)
}

fn expm1_base() -> ScalarFunction {
    ScalarFunction::new("expm1", Domain::REALS, f64::exp_m1, f64::exp)
        .with_convexity(Convexity::Convex)
        .with_fixes_zero(true)
}

/// `log(1 + x)`, inverse `expm1`.
pub fn log1p() -> ScalarFunction {
    log1p_base().with_inverse(expm1_base())
}

/// `exp(x) - 1`, inverse `log1p`.
pub fn expm1() -> ScalarFunction {
    expm1_base().with_inverse(log1p_base())
}

/// `x / (1 + x)`, inverse `y / (1 - y)`.
pub fn mobius() -> ScalarFunction {
    let inv = ScalarFunction::new(
        "mobius_inverse",
        Domain::open_below(1.0),
        |y| y / (1.0 - y),
        |y| 1.0 / ((1.0 - y) * (1.0 - y)),
    )
    .with_convexity(Convexity::Convex)
    .with_fixes_zero(true);
    ScalarFunction::new(
        "mobius",
        Domain::open_from(-1.0),
        |x| x / (1.0 + x),
        |x| 1.0 / ((1.0 + x) * (1.0 + x)),
    )
    .with_convexity(Convexity::Concave)
    .with_fixes_zero(true)
    .with_inverse(inv)
}

/// Natural logarithm on `(0, inf)`, inverse `exp`.
pub fn log() -> ScalarFunction {
    let exp = ScalarFunction::new("exp", Domain::REALS, f64::exp, f64::exp).with_convexity(Convexity::Convex);
    ScalarFunction::new("log", Domain::open_from(0.0), f64::ln, |x| 1.0 / x)
        .with_convexity(Convexity::Concave)
        .with_inverse(exp)
}

/// `x / log x` on `(1, inf)`.
pub fn x_over_log() -> ScalarFunction {
    ScalarFunction::new(
        "x/log",
        Domain::open_from(1.0),
        |x| x / x.ln(),
        |x| {
            let l = x.ln();
            (l - 1.0) / (l * l)
        },
    )
}

/// Every catalog function the suites draw from.
pub fn function_catalog() -> Vec<ScalarFunction> {
    let mut v = vec![identity()];
    v.extend([0.5, 2.0 / 3.0, 1.0, 1.5, 2.0, 3.0].into_iter().map(power));
    v.extend([log1p(), expm1(), mobius(), sqrt()]);
    v
}

/// The convex functions exercised by the forward-direction suites.
pub fn convex_suite() -> Vec<ScalarFunction> {
    vec![power(1.5), power(2.0), power(3.0), expm1()]
}

/// The concave functions exercised by the reversed-direction suites.
pub fn concave_suite() -> Vec<ScalarFunction> {
    vec![sqrt(), power(2.0 / 3.0), log1p(), mobius()]
}

/// `n`-fold composition `f o f o ... o f`; `iterate(f, 1)` is `f` itself.
pub fn iterate(f: &ScalarFunction, n: usize) -> Result<ScalarFunction> {
    if n == 0 {
        return Err(Error::InvalidInput("iteration count must be positive".into()));
    }
    if n == 1 {
        return Ok(f.clone());
    }
    let inverse = match f.inverse() {
        Some(inv) => Some(Arc::new(iterate(inv, n)?)),
        None => None,
    };
    Ok(ScalarFunction {
        name: format!("iterate({},{n})", f.name),
        repr: Repr::Iterate {
            base: Arc::new(f.clone()),
            depth: n,
        },
        domain: f.domain,
        // Compositions of increasing convex (concave) maps stay convex (concave).
        convexity: f.convexity,
        fixes_zero: f.fixes_zero,
        inverse,
    })
}

/// Tangent slopes `(a, b) = (f'(m), f'(M))` bracketing the chord over `[m, M]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub a: f64,
    pub b: f64,
    pub slope: f64,
}

/// Slopes of `f` at the ends of `[m, M]`, with the chord-ordering check
/// `a <= slope <= b` (convex) or `b <= slope <= a` (concave).
pub fn chord_coefficients(f: &ScalarFunction, m: f64, big_m: f64) -> Result<Chord> {
    if !(m < big_m) || m < 0.0 {
        return Err(Error::InvalidInterval {
            lo: m,
            hi: big_m,
            reason: "need 0 <= m < M".into(),
        });
    }
    for x in [m, big_m] {
        if !f.domain().contains(x) {
            return Err(f.domain_error(x, None));
        }
    }
    let a = f.deriv(m);
    let b = f.deriv(big_m);
    let slope = (f.eval(big_m) - f.eval(m)) / (big_m - m);
    let tol = 1e-12 * (1.0 + slope.abs());
    match f.convexity() {
        Convexity::Convex => {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::InfiniteCoefficient {
                    name: format!("{}'", f.name()),
                });
            }
            if a > slope + tol || slope > b + tol {
                return Err(Error::Hypothesis(format!(
                    "{} is tagged convex but {a} <= {slope} <= {b} fails",
                    f.name()
                )));
            }
        }
        Convexity::Concave => {
            if b > slope + tol || slope > a + tol {
                return Err(Error::Hypothesis(format!(
                    "{} is tagged concave but {b} <= {slope} <= {a} fails",
                    f.name()
                )));
            }
        }
        Convexity::Neither => {}
    }
    Ok(Chord { a, b, slope })
}

/// `n` log-spaced points strictly inside `(lo, hi)`, or on `(lo, hi]` when `include_hi`.
pub fn log_spaced(lo: f64, hi: f64, n: usize, include_hi: bool) -> Vec<f64> {
    let ratio = (hi / lo).ln();
    let steps = if include_hi { n } else { n + 1 } as f64;
    (1..=n)
        .map(|k| {
            if include_hi && k == n {
                hi
            } else {
                lo * (ratio * k as f64 / steps).exp()
            }
        })
        .collect()
}
