//! The semicircle distribution function, the Logan–Shepp–Vershik–Kerov
//! curve, and the two limit curves built from them: `G`, the scaled
//! position of a freshly inserted box, and `H(T) = √T · G(1/T)`, the
//! scaled trajectory of a marked box.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("{name} argument {value} outside [{lo}, {hi}]")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("inversion of F_SC at {x} did not reach tolerance after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        x: f64,
        iterations: usize,
        residual: f64,
    },
    #[error("invalid inversion config: {0}")]
    InvalidConfig(&'static str),
}

pub type Result<T> = std::result::Result<T, CurveError>;

/// A point of the plane. Limit-curve values and scaled box positions live here.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
}

impl CurvePoint {
    pub const fn new(x: f64, y: f64) -> Self {
        CurvePoint { x, y }
    }

    /// `(x₁, y₁) ≺ (x₂, y₂)` iff `x₁ ≤ x₂` and `y₁ ≥ y₂`.
    pub fn prec(self, other: CurvePoint) -> bool {
        self.x <= other.x && self.y >= other.y
    }

    /// Euclidean norm.
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: CurvePoint) -> f64 {
        (self - other).norm()
    }
}

impl Add for CurvePoint {
    type Output = CurvePoint;
    fn add(self, o: CurvePoint) -> CurvePoint {
        CurvePoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for CurvePoint {
    type Output = CurvePoint;
    fn sub(self, o: CurvePoint) -> CurvePoint {
        CurvePoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<CurvePoint> for f64 {
    type Output = CurvePoint;
    fn mul(self, p: CurvePoint) -> CurvePoint {
        CurvePoint::new(self * p.x, self * p.y)
    }
}

pub fn prec(p: CurvePoint, q: CurvePoint) -> bool {
    p.prec(q)
}

fn check_domain(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(CurveError::OutOfDomain {
            name,
            value,
            lo,
            hi,
        })
    }
}

/// Distribution function of the semicircle law on `[-2, 2]`.
pub fn f_sc(y: f64) -> Result<f64> {
    check_domain("F_SC", y, -2.0, 2.0)?;
    Ok(f_sc_unchecked(y))
}

fn f_sc_unchecked(y: f64) -> f64 {
    let value = 0.5 + (y * (4.0 - y * y).sqrt() / 4.0 + (y / 2.0).asin()) / PI;
    value.clamp(0.0, 1.0)
}

/// Semicircle density `√(4 − y²) / 2π`, the derivative of [`f_sc`].
pub fn semicircle_density(y: f64) -> f64 {
    (4.0 - y * y).max(0.0).sqrt() / (2.0 * PI)
}

/// The Logan–Shepp–Vershik–Kerov curve.
pub fn omega_star(y: f64) -> Result<f64> {
    check_domain("Ω★", y, -2.0, 2.0)?;
    Ok(omega_star_unchecked(y))
}

fn omega_star_unchecked(y: f64) -> f64 {
    2.0 / PI * ((4.0 - y * y).sqrt() + y * (y / 2.0).asin())
}

/// Stopping rule for inverting `F_SC`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionConfig {
    pub abs_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig {
            abs_tolerance: 1e-12,
            max_iterations: 200,
        }
    }
}

impl InversionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.abs_tolerance.is_nan() || self.abs_tolerance <= 0.0 {
            return Err(CurveError::InvalidConfig("abs_tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(CurveError::InvalidConfig(
                "max_iterations must be at least 1",
            ));
        }
        Ok(())
    }
}

/// Evaluator for `u`, `v`, `G` and `H`, parameterised by the inversion rule.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LimitCurves {
    pub inversion: InversionConfig,
}

impl LimitCurves {
    pub fn new(inversion: InversionConfig) -> Result<Self> {
        inversion.validate()?;
        Ok(LimitCurves { inversion })
    }

    /// `u = F_SC⁻¹`, by Newton steps safeguarded with a bisection bracket.
    ///
    /// Iterates until the step falls below a few ulps, then checks the
    /// residual against `abs_tolerance`.
    pub fn u(&self, x: f64) -> Result<f64> {
        check_domain("u", x, 0.0, 1.0)?;
        if x == 0.0 {
            return Ok(-2.0);
        }
        if x == 1.0 {
            return Ok(2.0);
        }
        let cfg = self.inversion;
        let (mut lo, mut hi) = (-2.0_f64, 2.0_f64);
        // F_SC is odd about 1/2 and close to linear in the middle
        let mut y = (2.0 * PI * (x - 0.5) / 2.0).clamp(-1.9, 1.9);
        let mut residual = f_sc_unchecked(y) - x;
        for _ in 0..cfg.max_iterations {
            if residual == 0.0 {
                break;
            }
            if residual > 0.0 {
                hi = y;
            } else {
                lo = y;
            }
            let slope = semicircle_density(y);
            let newton = y - residual / slope;
            let next = if slope > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let step = (next - y).abs();
            y = next;
            residual = f_sc_unchecked(y) - x;
            if step <= 4.0 * f64::EPSILON * y.abs().max(1.0) || hi - lo <= f64::EPSILON {
                break;
            }
        }
        if residual.abs() <= cfg.abs_tolerance {
            Ok(y)
        } else {
            Err(CurveError::NoConvergence {
                x,
                iterations: cfg.max_iterations,
                residual: residual.abs(),
            })
        }
    }

    /// `v = Ω★ ∘ u`.
    pub fn v(&self, x: f64) -> Result<f64> {
        Ok(omega_star_unchecked(self.u(x)?))
    }

    /// `(u(x), v(x))` from a single inversion.
    pub fn uv(&self, x: f64) -> Result<(f64, f64)> {
        let u = self.u(x)?;
        Ok((u, omega_star_unchecked(u)))
    }

    /// `G(x) = ((v + u)/2, (v − u)/2)`.
    pub fn g(&self, x: f64) -> Result<CurvePoint> {
        let (u, v) = self.uv(x)?;
        Ok(CurvePoint::new((v + u) / 2.0, (v - u) / 2.0))
    }

    /// `H(T) = √T · G(1/T)` for `T ≥ 1`.
    pub fn h(&self, t: f64) -> Result<CurvePoint> {
        if !t.is_finite() || t < 1.0 {
            return Err(CurveError::OutOfDomain {
                name: "H",
                value: t,
                lo: 1.0,
                hi: f64::INFINITY,
            });
        }
        Ok(t.sqrt() * self.g(1.0 / t)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn curves() -> LimitCurves {
        LimitCurves::default()
    }

    /// Composite Simpson rule for the semicircle density on [-2, y].
    fn semicircle_mass(y: f64) -> f64 {
        let n = 20_000;
        let h = (y + 2.0) / n as f64;
        let mut s = semicircle_density(-2.0) + semicircle_density(y);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * semicircle_density(-2.0 + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn f_sc_values() {
        assert_eq!(f_sc(0.0).unwrap(), 0.5);
        assert_eq!(f_sc(2.0).unwrap(), 1.0);
        assert_eq!(f_sc(-2.0).unwrap(), 0.0);
        let expected = 0.5 + (3f64.sqrt() / 4.0 + PI / 6.0) / PI;
        assert!((f_sc(1.0).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.804_498).abs() < 1e-6);
        // quadrature: the density has a square-root edge, Simpson is good to ~1e-7 here
        assert!((semicircle_mass(1.0) - expected).abs() < 1e-6);
        assert!(f_sc(2.0001).is_err());
        assert!(f_sc(f64::NAN).is_err());
    }

    #[test]
    fn omega_star_values() {
        assert!((omega_star(0.0).unwrap() - 4.0 / PI).abs() < 1e-15);
        assert!((omega_star(2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((omega_star(-2.0).unwrap() - 2.0).abs() < 1e-15);
        let expected = 2.0 / PI * (3f64.sqrt() + PI / 6.0);
        assert!((omega_star(1.0).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 1.435_991_1).abs() < 1e-7);
        assert!(omega_star(-3.0).is_err());
    }

    #[test]
    fn u_values_and_round_trip() {
        let c = curves();
        assert_eq!(c.u(0.5).unwrap(), 0.0);
        assert_eq!(c.u(0.0).unwrap(), -2.0);
        assert_eq!(c.u(1.0).unwrap(), 2.0);
        let x1 = f_sc(1.0).unwrap();
        assert!((c.u(x1).unwrap() - 1.0).abs() < 1e-9);
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            let y = c.u(x).unwrap();
            assert!((f_sc(y).unwrap() - x).abs() <= TOL, "x={x}");
        }
        assert!(c.u(1.5).is_err());
    }

    #[test]
    fn tiny_iteration_budget_reports_no_convergence() {
        let c = LimitCurves::new(InversionConfig {
            abs_tolerance: 1e-15,
            max_iterations: 1,
        })
        .unwrap();
        assert!(matches!(c.u(0.01), Err(CurveError::NoConvergence { .. })));
        assert!(LimitCurves::new(InversionConfig {
            abs_tolerance: 0.0,
            max_iterations: 5
        })
        .is_err());
    }

    #[test]
    fn g_values() {
        let c = curves();
        let g0 = c.g(0.0).unwrap();
        let g1 = c.g(1.0).unwrap();
        let gm = c.g(0.5).unwrap();
        assert!((g0.x).abs() < 1e-12 && (g0.y - 2.0).abs() < 1e-12);
        assert!((g1.x - 2.0).abs() < 1e-12 && g1.y.abs() < 1e-12);
        assert!((gm.x - 2.0 / PI).abs() < 1e-12 && (gm.y - 2.0 / PI).abs() < 1e-12);
        // rotating back by 45° lands on the Ω★ graph
        for x in [0.2, 0.8] {
            let p = c.g(x).unwrap();
            let (u, v) = (p.x - p.y, p.x + p.y);
            assert!((omega_star(u).unwrap() - v).abs() < 1e-12);
        }
    }

    #[test]
    fn g_is_monotone_and_bounded() {
        let c = curves();
        let pts: Vec<_> = (0..=1000)
            .map(|i| c.g(i as f64 / 1000.0).unwrap())
            .collect();
        for w in pts.windows(2) {
            assert!(w[0].prec(w[1]));
        }
        for p in &pts {
            assert!((-1e-12..=2.0 + 1e-12).contains(&p.x) && (-1e-12..=2.0 + 1e-12).contains(&p.y));
        }
        let ys: Vec<_> = (0..=1000)
            .map(|i| f_sc(-2.0 + 4.0 * i as f64 / 1000.0).unwrap())
            .collect();
        assert!(ys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn g_continuity_in_the_interior() {
        let c = curves();
        for x in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let base = c.g(x).unwrap();
            let mut prev = f64::INFINITY;
            for k in 1..8 {
                let d = c.g(x + 10f64.powi(-k)).unwrap().distance(base);
                assert!(d < prev);
                prev = d;
            }
            assert!(prev < 1e-6);
        }
    }

    #[test]
    fn h_values() {
        let c = curves();
        let h1 = c.h(1.0).unwrap();
        assert!((h1.x - 2.0).abs() < 1e-12 && h1.y.abs() < 1e-12);
        let h4 = c.h(4.0).unwrap();
        let g = c.g(0.25).unwrap();
        assert!((h4.x - 2.0 * g.x).abs() < 1e-15 && (h4.y - 2.0 * g.y).abs() < 1e-15);
        let big = c.h(1e4).unwrap();
        assert!((big.x - 0.01).abs() < 0.01 * 0.01);
        assert!(c.h(0.99).is_err());
        let grid: Vec<_> = (0..=200)
            .map(|i| c.h(1.0 + i as f64 / 100.0).unwrap())
            .collect();
        assert!(grid.windows(2).all(|w| w[0].x > w[1].x && w[0].y < w[1].y));
    }

    #[test]
    fn prec_examples() {
        assert!(prec(CurvePoint::new(0.0, 2.0), CurvePoint::new(2.0, 0.0)));
        assert!(!prec(CurvePoint::new(1.0, 1.0), CurvePoint::new(0.0, 2.0)));
        let p = CurvePoint::new(0.3, 0.4);
        assert!(prec(p, p));
    }
}
