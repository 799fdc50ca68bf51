//! Truncated power series with exact rational coefficients.
//!
//! A series carries its coefficients `c₀, c₁, …` and the order `N` of its
//! remainder, i.e. it is known modulo `x^N`. Products and compositions
//! track the remainder order from the operands' valuations, so composing a
//! series with an odd series that starts at `x` loses no order.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Q = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Q>,
    order: usize,
}

impl PowerSeries {
    /// Coefficients at or beyond `order` are dropped.
    pub fn new(mut coeffs: Vec<Q>, order: usize) -> Self {
        coeffs.truncate(order);
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PowerSeries { coeffs, order }
    }

    pub fn from_ints(coeffs: &[(i128, i128)], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&(n, d)| Q::new(n, d)).collect(), order)
    }

    /// The series `x + O(x^order)`.
    pub fn variable(order: usize) -> Self {
        Self::new(vec![Q::zero(), Q::one()], order)
    }

    pub fn constant(c: Q, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The exact polynomial `1`, with no remainder.
    pub fn one() -> Self {
        Self::new(vec![Q::one()], usize::MAX)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).copied().unwrap_or_else(Q::zero)
    }

    /// Stored coefficients; every later one below `order` is zero.
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Index of the first nonzero coefficient; `order` for a series known to be `O(x^order)`.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.order)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order.min(self.order))
    }

    pub fn scale(&self, k: Q) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect(), self.order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let len = self.coeffs.len().max(other.coeffs.len()).min(order);
        Self::new(
            (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect(),
            order,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-Q::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self
            .order
            .saturating_add(other.valuation())
            .min(other.order.saturating_add(self.valuation()));
        let len = (self.coeffs.len() + other.coeffs.len())
            .saturating_sub(1)
            .min(order);
        let mut coeffs = vec![Q::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().take(len.saturating_sub(i)) {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs, order)
    }

    pub fn powi(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `self ∘ inner`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Self {
        let v = inner.valuation();
        assert!(v >= 1, "inner series must vanish at the origin");
        // the dropped tail of `self` contributes O(inner^order)
        let mut order = self.order.saturating_mul(v);
        let mut out = Self::new(vec![], usize::MAX);
        let mut power = Self::one();
        for k in 0..self.coeffs.len() {
            if k > 0 {
                power = power.mul(inner);
            }
            let a = self.coeff(k);
            if !a.is_zero() {
                order = order.min(power.order);
                out = out.add(&power.scale(a));
            }
        }
        out.truncate(order)
    }

    /// Compositional inverse `g` with `self ∘ g = x`; requires `c₀ = 0` and `c₁ ≠ 0`.
    pub fn revert(&self) -> Self {
        assert!(self.coeff(0).is_zero(), "series must vanish at the origin");
        let lead = self.coeff(1);
        assert!(!lead.is_zero(), "series must have a nonzero linear term");
        let order = self.order;
        let mut coeffs = vec![Q::zero(), lead.recip()];
        for k in 2..order {
            coeffs.push(Q::zero());
            let g = Self::new(coeffs.clone(), order);
            let residual = self.compose(&g).coeff(k);
            coeffs[k] = -residual / lead;
        }
        Self::new(coeffs, order)
    }

    /// Multiplicative inverse; requires `c₀ ≠ 0` and a finite order.
    pub fn recip(&self) -> Self {
        let c0 = self.coeff(0);
        assert!(!c0.is_zero(), "series must have a nonzero constant term");
        let mut out = vec![c0.recip()];
        for k in 1..self.order {
            let s: Q = (1..=k).map(|j| self.coeff(j) * out[k - j]).sum();
            out.push(-s / c0);
        }
        Self::new(out, self.order)
    }

    /// `self^p` for rational `p`; requires `c₀ = 1` and a finite order.
    pub fn pow_ratio(&self, p: Q) -> Self {
        assert!(self.coeff(0).is_one(), "series must start with 1");
        let h = self.sub(&Self::one());
        let mut acc = Self::constant(Q::one(), self.order);
        let mut term = Self::one();
        let mut binom = Q::one();
        for k in 1..self.order {
            term = term.mul(&h).truncate(self.order);
            binom = binom * (p - Q::from_integer(k as i128 - 1)) / Q::from_integer(k as i128);
            acc = acc.add(&term.scale(binom));
        }
        acc
    }

    /// Substitutes `x ↦ x^k`.
    pub fn stretch(&self, k: usize) -> Self {
        let mut coeffs = vec![Q::zero(); self.coeffs.len() * k];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = *c;
        }
        Self::new(coeffs, self.order.saturating_mul(k))
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![Q::zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs, self.order.saturating_add(k))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + q_to_f64(*c))
    }
}

pub fn q_to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            write!(f, "{c}·x^{k} + ")?;
        }
        write!(f, "O(x^{})", self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i128, d: i128) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn product_order_uses_valuations() {
        let a = PowerSeries::from_ints(&[(0, 1), (1, 1), (0, 1), (1, 40)], 5);
        let sq = a.mul(&a);
        assert_eq!(sq.order(), 6);
        assert_eq!(sq.coeff(2), q(1, 1));
        assert_eq!(sq.coeff(4), q(1, 20));
    }

    #[test]
    fn revert_known_inverse() {
        // x/(1+x) ↔ x/(1−x)
        let f = PowerSeries::new(
            (0..8)
                .map(|k| {
                    if k == 0 {
                        q(0, 1)
                    } else {
                        q(if k % 2 == 1 { 1 } else { -1 }, 1)
                    }
                })
                .collect(),
            8,
        );
        let g = f.revert();
        for k in 1..8 {
            assert_eq!(g.coeff(k), q(1, 1));
        }
    }

    #[test]
    fn recip_and_pow() {
        let s = PowerSeries::from_ints(&[(1, 1), (1, 1)], 6);
        let r = s.recip();
        assert_eq!(
            r.coeffs(),
            &[q(1, 1), q(-1, 1), q(1, 1), q(-1, 1), q(1, 1), q(-1, 1)]
        );
        assert_eq!(r.order(), 6);
        let root = s.pow_ratio(q(1, 2));
        let back = root.mul(&root);
        assert_eq!(back.coeff(0), q(1, 1));
        assert_eq!(back.coeff(1), q(1, 1));
        for k in 2..6 {
            assert_eq!(back.coeff(k), q(0, 1));
        }
    }

    fn odd_series() -> impl Strategy<Value = PowerSeries> {
        prop::collection::vec((-20i128..=20, 1i128..=50), 3).prop_map(|c| {
            PowerSeries::new(
                vec![
                    q(0, 1),
                    q(1, 1),
                    q(0, 1),
                    q(c[0].0, c[0].1),
                    q(0, 1),
                    q(c[1].0, c[1].1),
                    q(0, 1),
                ],
                7,
            )
        })
    }

    proptest! {
        #[test]
        fn revert_is_a_two_sided_inverse(f in odd_series()) {
            let g = f.revert();
            let id = PowerSeries::variable(7);
            prop_assert_eq!(f.compose(&g), id.clone());
            prop_assert_eq!(g.compose(&f), id);
        }
    }
}
