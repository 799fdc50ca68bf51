//! Large-`T` behaviour of the trajectory curve `H`.
//!
//! Near `x = 0` the inverse semicircle distribution function expands in
//! powers of `(κx)^{1/3}` with `κ = 3π/2`. Working through the auxiliary
//! function `f(x) = ∛(κ F_SC(x² − 2))`, whose Taylor series is odd with
//! rational coefficients, every expansion used here has coefficients of the
//! form `r · π^a · κ^p` with `r`, `p` rational. [`Coefficient`] stores them
//! exactly in that form.
//!
//! The published expansions are stored verbatim in [`printed`]; [`derive`]
//! rebuilds each of them from first principles so the two can be compared
//! coefficient by coefficient.

pub mod derive;
pub mod power_series;
pub mod printed;

use std::f64::consts::PI;
use std::fmt;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::limit_curves::{f_sc, CurveError, LimitCurves};
pub use power_series::{PowerSeries, Q};

/// `κ = 3π/2`, the base of every fractional power in the expansions.
pub const KAPPA: f64 = 1.5 * PI;

/// Smallest `T` accepted by the error report.
pub const MIN_REPORT_T: f64 = 4.0;

/// Largest `x` at which the `F_SC⁻¹` expansion is used.
pub const MAX_SERIES_X: f64 = 0.2;

pub type Exponent = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error("{what} requires {constraint}, got {value}")]
    Domain {
        what: &'static str,
        constraint: &'static str,
        value: f64,
    },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("series mismatch: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, AsymptoticsError>;

/// The exact real number `rational · π^pi_power · κ^kappa_power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coefficient {
    pub rational: Q,
    pub pi_power: i32,
    pub kappa_power: Exponent,
}

impl Coefficient {
    pub fn rational(r: Q) -> Self {
        Coefficient {
            rational: r,
            pi_power: 0,
            kappa_power: Exponent::zero(),
        }
    }

    pub fn ratio(num: i128, den: i128) -> Self {
        Self::rational(Q::new(num, den))
    }

    pub fn with_kappa(self, num: i64, den: i64) -> Self {
        Coefficient {
            kappa_power: Exponent::new(num, den),
            ..self
        }
    }

    pub fn with_pi(self, power: i32) -> Self {
        Coefficient {
            pi_power: power,
            ..self
        }
    }

    pub fn value(&self) -> f64 {
        let r = power_series::q_to_f64(self.rational);
        let p = self.kappa_power.to_f64().expect("small exponent");
        r * PI.powi(self.pi_power) * (p * KAPPA.ln()).exp()
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        if self.pi_power != 0 {
            write!(f, "·π^{}", self.pi_power)?;
        }
        if !self.kappa_power.is_zero() {
            write!(f, "·(3π/2)^({})", self.kappa_power)?;
        }
        Ok(())
    }
}

/// Expansion variable of a [`SeriesExpansion`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Variable {
    X,
    Y,
    T,
    InvT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub exponent: Exponent,
    pub coefficient: Coefficient,
}

impl Term {
    pub fn new(exponent: Exponent, coefficient: Coefficient) -> Self {
        Term {
            exponent,
            coefficient,
        }
    }
}

/// `Σ cᵢ · var^{eᵢ} + O(var^{truncation_order})` with strictly increasing exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesExpansion {
    variable: Variable,
    terms: Vec<Term>,
    truncation_order: Exponent,
}

impl SeriesExpansion {
    /// Sorts the terms, merges equal exponents and drops zero coefficients.
    /// Fails if two terms at one exponent have incompatible irrational factors
    /// or a term reaches the truncation order.
    pub fn new(variable: Variable, terms: Vec<Term>, truncation_order: Exponent) -> Result<Self> {
        let mut terms = terms;
        terms.sort_by_key(|t| t.exponent);
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.exponent == t.exponent => {
                    let (a, b) = (last.coefficient, t.coefficient);
                    if a.pi_power != b.pi_power || a.kappa_power != b.kappa_power {
                        return Err(AsymptoticsError::Inconsistent(format!(
                            "cannot add {a} and {b} at exponent {}",
                            t.exponent
                        )));
                    }
                    last.coefficient.rational += b.rational;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coefficient.is_zero());
        if let Some(t) = merged.iter().find(|t| t.exponent >= truncation_order) {
            return Err(AsymptoticsError::Inconsistent(format!(
                "term with exponent {} at or beyond truncation order {truncation_order}",
                t.exponent
            )));
        }
        Ok(SeriesExpansion {
            variable,
            terms: merged,
            truncation_order,
        })
    }

    /// Reads off an integer-power series in `variable`.
    pub fn from_power_series(variable: Variable, s: &PowerSeries) -> Self {
        let terms = s
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| Term::new(Exponent::from_integer(k as i64), Coefficient::rational(*c)))
            .collect();
        Self::new(variable, terms, Exponent::from_integer(s.order() as i64))
            .expect("integer powers are well ordered")
    }

    /// The inverse of [`SeriesExpansion::from_power_series`]; `None` unless
    /// every exponent is a nonnegative integer and every coefficient rational.
    pub fn to_power_series(&self) -> Option<PowerSeries> {
        let order = self.truncation_order;
        if !order.is_integer() || order < Exponent::zero() {
            return None;
        }
        let mut coeffs = vec![Q::zero(); *order.numer() as usize];
        for t in &self.terms {
            let c = t.coefficient;
            if !t.exponent.is_integer()
                || t.exponent < Exponent::zero()
                || c.pi_power != 0
                || !c.kappa_power.is_zero()
            {
                return None;
            }
            coeffs[*t.exponent.numer() as usize] = c.rational;
        }
        Some(PowerSeries::new(coeffs, *order.numer() as usize))
    }

    pub fn variable(&self) -> Variable {
        self.variable
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn truncation_order(&self) -> Exponent {
        self.truncation_order
    }

    /// `(exponent, coefficient value)` pairs.
    pub fn numeric_terms(&self) -> Vec<(f64, f64)> {
        self.terms
            .iter()
            .map(|t| {
                (
                    t.exponent.to_f64().expect("small exponent"),
                    t.coefficient.value(),
                )
            })
            .collect()
    }

    /// Sums the listed terms at `at > 0` (or `at = 0` when no exponent is negative).
    pub fn evaluate(&self, at: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let c = t.coefficient.value();
                let e = t.exponent;
                if e.is_zero() {
                    c
                } else if at == 0.0 && e > Exponent::zero() {
                    0.0
                } else {
                    c * (e.to_f64().expect("small exponent") * at.ln()).exp()
                }
            })
            .sum()
    }

    pub fn scale(&self, k: Coefficient) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let c = t.coefficient;
                Term::new(
                    t.exponent,
                    Coefficient {
                        rational: c.rational * k.rational,
                        pi_power: c.pi_power + k.pi_power,
                        kappa_power: c.kappa_power + k.kappa_power,
                    },
                )
            })
            .collect();
        Self::new(self.variable, terms, self.truncation_order).expect("scaling preserves order")
    }

    /// Multiplies by `var^shift`.
    pub fn shift(&self, shift: Exponent) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.exponent + shift, t.coefficient))
            .collect();
        Self::new(self.variable, terms, self.truncation_order + shift)
            .expect("shifting preserves order")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.variable != other.variable {
            return Err(AsymptoticsError::Inconsistent(
                "adding series in different variables".into(),
            ));
        }
        let order = self.truncation_order.min(other.truncation_order);
        let terms = self
            .terms
            .iter()
            .chain(&other.terms)
            .filter(|t| t.exponent < order)
            .copied()
            .collect();
        Self::new(self.variable, terms, order)
    }

    pub fn with_variable(&self, variable: Variable) -> Self {
        SeriesExpansion {
            variable,
            ..self.clone()
        }
    }
}

impl fmt::Display for SeriesExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = match self.variable {
            Variable::X => "x",
            Variable::Y => "y",
            Variable::T => "t",
            Variable::InvT => "(1/T)",
        };
        for t in &self.terms {
            write!(f, "{}·{var}^({}) + ", t.coefficient, t.exponent)?;
        }
        write!(f, "O({var}^({}))", self.truncation_order)
    }
}

/// The Taylor series of [`f_aux`] at zero.
pub fn f_series() -> SeriesExpansion {
    printed::f()
}

/// The series of `f⁻¹`, checked against the compositional inverse of [`f_series`].
pub fn f_inverse_series() -> Result<SeriesExpansion> {
    let stored = printed::f_inverse();
    let f = f_series()
        .to_power_series()
        .expect("f has rational integer-power coefficients");
    let reverted = SeriesExpansion::from_power_series(Variable::Y, &f.revert());
    if reverted != stored {
        return Err(AsymptoticsError::Inconsistent(format!(
            "f_inverse stored as {stored} but inversion gives {reverted}"
        )));
    }
    Ok(stored)
}

/// `f(x) = ∛(κ · F_SC(x² − 2))` on `[0, 2]`.
pub fn f_aux(x: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&x) {
        return Err(AsymptoticsError::Domain {
            what: "f",
            constraint: "0 ≤ x ≤ 2",
            value: x,
        });
    }
    Ok((KAPPA * f_sc(x * x - 2.0)?).cbrt())
}

/// The `F_SC⁻¹` expansion evaluated at `x`. Intended for `0 ≤ x ≤` [`MAX_SERIES_X`].
pub fn fsc_inverse_series(x: f64) -> f64 {
    printed::fsc_inverse().evaluate(x)
}

/// First coordinate of `H(T)` from its large-`T` expansion.
pub fn h1_asym(t: f64) -> f64 {
    printed::h1().evaluate(1.0 / t)
}

/// Second coordinate of `H(T)` from its large-`T` expansion.
pub fn h2_asym(t: f64) -> f64 {
    printed::h2().evaluate(1.0 / t)
}

/// One row of the series-versus-numerics comparison for `H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub t: f64,
    pub h1_numeric: f64,
    pub h1_series: f64,
    pub h1_abs_err: f64,
    /// `h1_abs_err · T^{15/6}`
    pub h1_scaled_err: f64,
    pub h2_numeric: f64,
    pub h2_series: f64,
    pub h2_abs_err: f64,
    /// `h2_abs_err · T^{13/6}`
    pub h2_scaled_err: f64,
}

/// Compares `H` computed by numerical inversion with the truncated expansions.
pub fn series_error_report(grid: &[f64], curves: &LimitCurves) -> Result<Vec<ErrorRow>> {
    if let Some(&bad) = grid.iter().find(|&&t| !t.is_finite() || t < MIN_REPORT_T) {
        return Err(AsymptoticsError::Domain {
            what: "error report",
            constraint: "T ≥ 4",
            value: bad,
        });
    }
    let o1 = printed::h1()
        .truncation_order()
        .to_f64()
        .expect("small exponent");
    let o2 = printed::h2()
        .truncation_order()
        .to_f64()
        .expect("small exponent");
    grid.iter()
        .map(|&t| {
            let h = curves.h(t)?;
            let (s1, s2) = (h1_asym(t), h2_asym(t));
            let (e1, e2) = ((h.x - s1).abs(), (h.y - s2).abs());
            Ok(ErrorRow {
                t,
                h1_numeric: h.x,
                h1_series: s1,
                h1_abs_err: e1,
                h1_scaled_err: e1 * t.powf(o1),
                h2_numeric: h.y,
                h2_series: s2,
                h2_abs_err: e2,
                h2_scaled_err: e2 * t.powf(o2),
            })
        })
        .collect()
}

/// Ratios `err(args[i+1]) / err(args[i])` of the absolute differences between
/// `exact` and `approx`.
pub fn error_ratios(
    args: &[f64],
    exact: impl Fn(f64) -> f64,
    approx: impl Fn(f64) -> f64,
) -> Vec<f64> {
    let errs: Vec<f64> = args.iter().map(|&a| (exact(a) - approx(a)).abs()).collect();
    errs.windows(2).map(|w| w[1] / w[0]).collect()
}
