//! The published expansions, coefficient for coefficient.

use super::{Coefficient, Exponent, SeriesExpansion, Term, Variable};

fn e(num: i64, den: i64) -> Exponent {
    Exponent::new(num, den)
}

fn q(num: i128, den: i128) -> Coefficient {
    Coefficient::ratio(num, den)
}

fn series(
    variable: Variable,
    terms: Vec<(Exponent, Coefficient)>,
    order: Exponent,
) -> SeriesExpansion {
    let terms = terms.into_iter().map(|(x, c)| Term::new(x, c)).collect();
    SeriesExpansion::new(variable, terms, order).expect("printed series are well formed")
}

/// `f(x) = x − x³/40 − 39x⁵/22400 + O(x⁷)`.
pub fn f() -> SeriesExpansion {
    series(
        Variable::X,
        vec![
            (e(1, 1), q(1, 1)),
            (e(3, 1), q(-1, 40)),
            (e(5, 1), q(-39, 22400)),
        ],
        e(7, 1),
    )
}

/// `f⁻¹(y) = y + y³/40 + 81y⁵/22400 + O(y⁷)`.
pub fn f_inverse() -> SeriesExpansion {
    series(
        Variable::Y,
        vec![
            (e(1, 1), q(1, 1)),
            (e(3, 1), q(1, 40)),
            (e(5, 1), q(81, 22400)),
        ],
        e(7, 1),
    )
}

/// `F_SC⁻¹(x) = −2 + (κx)^{2/3} + (κx)^{4/3}/20 + 11(κx)²/1400 + O(x^{8/3})`.
pub fn fsc_inverse() -> SeriesExpansion {
    series(
        Variable::X,
        vec![
            (e(0, 1), q(-2, 1)),
            (e(2, 3), q(1, 1).with_kappa(2, 3)),
            (e(4, 3), q(1, 20).with_kappa(4, 3)),
            (e(2, 1), q(11, 1400).with_kappa(2, 1)),
        ],
        e(8, 3),
    )
}

/// `Ω★(t² − 2) + t² − 2 = 4t³/3π + t⁵/30π + 3t⁷/1120π + O(t⁹)`.
pub fn omega_shifted() -> SeriesExpansion {
    series(
        Variable::T,
        vec![
            (e(3, 1), q(4, 3).with_pi(-1)),
            (e(5, 1), q(1, 30).with_pi(-1)),
            (e(7, 1), q(3, 1120).with_pi(-1)),
        ],
        e(9, 1),
    )
}

/// `v + u = 2x + κ^{2/3}x^{5/3}/5 + κ^{4/3}x^{7/3}/28 + O(x³)`.
pub fn v_plus_u() -> SeriesExpansion {
    series(
        Variable::X,
        vec![
            (e(1, 1), q(2, 1)),
            (e(5, 3), q(1, 5).with_kappa(2, 3)),
            (e(7, 3), q(1, 28).with_kappa(4, 3)),
        ],
        e(3, 1),
    )
}

/// `v − u`, as printed before it is rescaled into `H₂`.
pub fn v_minus_u() -> SeriesExpansion {
    series(
        Variable::X,
        vec![
            (e(1, 1), q(2, 1)),
            (e(5, 3), q(1, 5).with_kappa(2, 3)),
            (e(7, 3), q(1, 28).with_kappa(4, 3)),
            (e(0, 1), q(4, 1)),
            (e(2, 3), q(-2, 1).with_kappa(2, 3)),
            (e(4, 3), q(-1, 10).with_kappa(4, 3)),
            (e(2, 1), q(-11, 700).with_kappa(2, 1)),
        ],
        e(8, 3),
    )
}

/// `H₁(T)` in powers of `1/T`.
pub fn h1() -> SeriesExpansion {
    series(
        Variable::InvT,
        vec![
            (e(1, 2), q(1, 1)),
            (e(7, 6), q(1, 10).with_kappa(2, 3)),
            (e(11, 6), q(1, 56).with_kappa(4, 3)),
        ],
        e(15, 6),
    )
}

/// `H₂(T)` in powers of `1/T`.
pub fn h2() -> SeriesExpansion {
    series(
        Variable::InvT,
        vec![
            (e(-1, 2), q(2, 1)),
            (e(1, 6), q(-1, 1).with_kappa(2, 3)),
            (e(3, 6), q(1, 1)),
            (e(5, 6), q(-1, 20).with_kappa(4, 3)),
            (e(7, 6), q(1, 10).with_kappa(2, 3)),
            (e(9, 6), q(-11, 1400).with_kappa(6, 3)),
            (e(11, 6), q(1, 56).with_kappa(4, 3)),
        ],
        e(13, 6),
    )
}
