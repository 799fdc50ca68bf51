//! Every expansion in [`super::printed`], rebuilt from Taylor coefficients
//! with exact arithmetic.
//!
//! Near the lower edge, with `s = y + 2`,
//!
//! ```text
//! κ F_SC(s − 2)       = s^{3/2} Σ_k  (3/2) C(1/2, k) (−1/4)^k / (k + 3/2) · s^k
//! Ω★(s − 2) + s − 2   = (1/π) s^{3/2} Σ_k  2 C(2k, k) / (4^k (2k+1)) · 4^{−k} / (k + 3/2) · s^k
//! ```
//!
//! The first comes from integrating the semicircle density, the second from
//! `Ω★′(y) = (2/π) arcsin(y/2)` and the arcsine series. Substituting
//! `s = x²` makes both odd power series with rational coefficients.

use num_traits::{One, Zero};

use super::power_series::{PowerSeries, Q};
use super::{
    printed, AsymptoticsError, Coefficient, Exponent, Result, SeriesExpansion, Term, Variable,
};

fn qi(n: i128) -> Q {
    Q::from_integer(n)
}

/// Generalised binomial coefficient `C(p, k)`.
fn binom(p: Q, k: usize) -> Q {
    (0..k).fold(Q::one(), |acc, i| {
        acc * (p - qi(i as i128)) / qi(i as i128 + 1)
    })
}

/// Taylor series of `f(x) = ∛(κ F_SC(x² − 2))`, known modulo `x^order`.
pub fn f_from_taylor(order: usize) -> PowerSeries {
    let k_max = order.saturating_sub(1) / 2;
    let half = Q::new(1, 2);
    let a: Vec<Q> = (0..k_max)
        .map(|k| {
            let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
            Q::new(3, 2) * binom(half, k) * sign
                / qi(4i128.pow(k as u32))
                / (qi(k as i128) + Q::new(3, 2))
        })
        .collect();
    let inner = PowerSeries::new(a, k_max).stretch(2);
    inner.pow_ratio(Q::new(1, 3)).shift(1).truncate(order)
}

/// Rational part `P(t)` of `Ω★(t² − 2) + t² − 2 = P(t) / π`, known modulo `t^order`.
pub fn omega_shifted_rational(order: usize) -> PowerSeries {
    let mut coeffs = vec![Q::zero(); order];
    for k in 0.. {
        let power = 2 * k + 3;
        if power >= order {
            break;
        }
        let central = binom(qi(2 * k as i128), k);
        let arcsine = central / qi(4i128.pow(k as u32)) / qi(2 * k as i128 + 1);
        coeffs[power] = qi(2) * arcsine / qi(4i128.pow(k as u32)) / (qi(k as i128) + Q::new(3, 2));
    }
    PowerSeries::new(coeffs, order)
}

/// Compositional inverse by the Lagrange formula
/// `[y^k] f⁻¹ = (1/k) [x^{k−1}] (x / f(x))^k`.
pub fn lagrange_inversion(f: &PowerSeries) -> PowerSeries {
    assert!(
        f.coeff(0).is_zero() && !f.coeff(1).is_zero(),
        "need f(0) = 0, f'(0) ≠ 0"
    );
    let order = f.order();
    // x / f(x) needs f / x to order − 1
    let f_over_x = PowerSeries::new(f.coeffs().iter().skip(1).copied().collect(), order - 1);
    let ratio = f_over_x.recip();
    let mut coeffs = vec![Q::zero(); order];
    for (k, c) in coeffs.iter_mut().enumerate().skip(1) {
        *c = ratio.powi(k).coeff(k - 1) / qi(k as i128);
    }
    PowerSeries::new(coeffs, order)
}

/// Rewrites `Σ c_k y^k` with `y = (κx)^{1/3}` as a series in `x`, every
/// coefficient multiplied by `factor`.
fn cube_root_substitution(s: &PowerSeries, factor: Coefficient) -> SeriesExpansion {
    let terms = s
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let k = k as i64;
            Term::new(
                Exponent::new(k, 3),
                Coefficient {
                    rational: factor.rational * c,
                    pi_power: factor.pi_power,
                    kappa_power: factor.kappa_power + Exponent::new(k, 3),
                },
            )
        })
        .collect();
    SeriesExpansion::new(Variable::X, terms, Exponent::new(s.order() as i64, 3))
        .expect("distinct powers of y give distinct exponents")
}

/// `F_SC⁻¹(x) = f⁻¹((κx)^{1/3})² − 2`.
pub fn fsc_inverse(f_inv: &PowerSeries) -> SeriesExpansion {
    let y_series = f_inv.powi(2).sub(&PowerSeries::constant(qi(2), usize::MAX));
    cube_root_substitution(&y_series, Coefficient::ratio(1, 1))
}

/// `v + u = Ω★(u) + u` with `u + 2 = f⁻¹((κx)^{1/3})²`.
pub fn v_plus_u(f_inv: &PowerSeries, omega: &PowerSeries) -> SeriesExpansion {
    let y_series = omega.compose(f_inv);
    // 1/π = (3/2) κ⁻¹
    cube_root_substitution(&y_series, Coefficient::ratio(3, 2).with_kappa(-1, 1))
}

/// `v − u = (v + u) − 2u`.
pub fn v_minus_u(f_inv: &PowerSeries, omega: &PowerSeries) -> Result<SeriesExpansion> {
    v_plus_u(f_inv, omega).add(&fsc_inverse(f_inv).scale(Coefficient::ratio(-2, 1)))
}

/// `(√T / 2) · s(1/T)` as a series in `1/T`.
pub fn scale_to_h(s: &SeriesExpansion) -> SeriesExpansion {
    s.scale(Coefficient::ratio(1, 2))
        .shift(Exponent::new(-1, 2))
        .with_variable(Variable::InvT)
}

/// The whole chain at the published truncation orders.
#[derive(Debug, Clone)]
pub struct DerivedSeries {
    pub f: PowerSeries,
    pub f_inverse: PowerSeries,
    pub f_inverse_lagrange: PowerSeries,
    pub omega_shifted: PowerSeries,
    pub fsc_inverse: SeriesExpansion,
    pub v_plus_u: SeriesExpansion,
    pub v_minus_u: SeriesExpansion,
    pub h1: SeriesExpansion,
    pub h2: SeriesExpansion,
}

impl DerivedSeries {
    pub fn compute() -> Result<Self> {
        let f = f_from_taylor(7);
        let f_inverse = f.revert();
        let f_inverse_lagrange = lagrange_inversion(&f);
        let omega_shifted = omega_shifted_rational(9);
        let fsc = fsc_inverse(&f_inverse);
        let vpu = v_plus_u(&f_inverse, &omega_shifted);
        let vmu = v_minus_u(&f_inverse, &omega_shifted)?;
        Ok(DerivedSeries {
            h1: scale_to_h(&vpu),
            h2: scale_to_h(&vmu),
            f,
            f_inverse,
            f_inverse_lagrange,
            omega_shifted,
            fsc_inverse: fsc,
            v_plus_u: vpu,
            v_minus_u: vmu,
        })
    }

    /// Pairs of (name, printed, derived) in a common representation.
    pub fn against_printed(&self) -> Vec<(&'static str, SeriesExpansion, SeriesExpansion)> {
        let omega = SeriesExpansion::from_power_series(Variable::T, &self.omega_shifted)
            .scale(Coefficient::ratio(1, 1).with_pi(-1));
        vec![
            (
                "f",
                printed::f(),
                SeriesExpansion::from_power_series(Variable::X, &self.f),
            ),
            (
                "f_inverse",
                printed::f_inverse(),
                SeriesExpansion::from_power_series(Variable::Y, &self.f_inverse),
            ),
            (
                "f_inverse (Lagrange)",
                printed::f_inverse(),
                SeriesExpansion::from_power_series(Variable::Y, &self.f_inverse_lagrange),
            ),
            ("omega_shifted", printed::omega_shifted(), omega),
            (
                "fsc_inverse",
                printed::fsc_inverse(),
                self.fsc_inverse.clone(),
            ),
            ("v_plus_u", printed::v_plus_u(), self.v_plus_u.clone()),
            ("v_minus_u", printed::v_minus_u(), self.v_minus_u.clone()),
            ("h1", printed::h1(), self.h1.clone()),
            ("h2", printed::h2(), self.h2.clone()),
        ]
    }

    /// Fails naming the first printed expansion that differs from its derivation.
    pub fn check_printed(&self) -> Result<()> {
        for (name, printed, derived) in self.against_printed() {
            if printed != derived {
                return Err(AsymptoticsError::Inconsistent(format!(
                    "{name}: printed {printed} but derived {derived}"
                )));
            }
        }
        Ok(())
    }
}
