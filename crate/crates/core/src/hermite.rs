//! Trigonometric Hermite matrix of a plane polynomial.
//!
//! Along the line through the origin in direction `θ`, put
//! `x1 = t^{-1}(z^{-1}+z)` and `x2 = i t^{-1}(z^{-1}−z)` with `z = e^{iθ}`.
//! Then `q(t) = t^m p(x)` is monic in `t` (after `p(0) = 1`), and its real
//! roots count real intersections of the line with the curve. The Hankel
//! matrix of Newton sums of `q` is positive semidefinite on the circle iff
//! every such line meets the curve in `m` real points.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polycore::{BivarPoly, TrigMatrix, TrigPoly};
use crate::scalar::{rat, Rational};

pub type Tp = TrigPoly<Rational>;

/// `q(t) = Σ q[k](z) t^k`, monic of degree `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinePoly {
    pub q: Vec<Tp>,
    /// `p(0,0)`, divided out so that `q[m] = 1`.
    pub normalization: Rational,
}

impl LinePoly {
    pub fn degree(&self) -> usize {
        self.q.len() - 1
    }
}

pub fn line_substitute(p: &BivarPoly) -> Result<LinePoly> {
    let p00 = p.constant_term();
    if p00.is_zero() {
        return Err(Error::OriginOnCurve);
    }
    let m = p.degree();
    if m < 1 {
        return Err(Error::DegreeZero);
    }
    let m = m as usize;
    let c1 = Tp::cos_basis(1);
    let s1 = Tp::sin_basis(1);
    let mut cpow = vec![Tp::one()];
    let mut spow = vec![Tp::one()];
    for k in 1..=m {
        cpow.push(&cpow[k - 1] * &c1);
        spow.push(&spow[k - 1] * &s1);
    }
    let mut q = vec![Tp::zero(); m + 1];
    for (&[a, b], c) in p.terms() {
        let k = m - (a + b) as usize;
        let term = (&cpow[a as usize] * &spow[b as usize]).scale(&(c / &p00));
        q[k] = &q[k] + &term;
    }
    Ok(LinePoly { q, normalization: p00 })
}

/// `N_0 … N_count` by the Newton identities.
pub fn newton_sums(q: &LinePoly, count: usize) -> Vec<Tp> {
    let m = q.degree();
    let coeff = |k: usize| &q.q[m - k];
    let mut n = vec![Tp::constant(rat(m as i64))];
    for k in 1..=count {
        let mut acc = if k <= m { coeff(k).scale(&rat(-(k as i64))) } else { Tp::zero() };
        for j in 1..=(k - 1).min(m) {
            acc = &acc - &(coeff(j) * &n[k - j]);
        }
        n.push(acc);
    }
    n
}

/// Hankel matrix with entry `(i, j)` (0-based) equal to `N_{i+j}`.
pub fn hermite_from_line(q: &LinePoly) -> TrigMatrix<Rational> {
    let m = q.degree();
    let n = newton_sums(q, 2 * m - 2);
    TrigMatrix::symmetric(m, |i, j| n[i + j].clone())
}

pub fn hermite_matrix(p: &BivarPoly) -> Result<TrigMatrix<Rational>> {
    Ok(hermite_from_line(&line_substitute(p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly;

    #[test]
    fn cubic_curve_line_polynomial() {
        let q = line_substitute(&parse_poly("1-x1-4*x1^2-x2^2+4*x1^3").unwrap()).unwrap();
        assert_eq!(q.q[0], Tp::from_i64_cos(&[0, 12, 0, 4]));
        assert_eq!(q.q[1], Tp::from_i64_cos(&[-10, 0, -3]));
        assert_eq!(q.q[2], Tp::from_i64_cos(&[0, -1]));
        assert_eq!(q.q[3], Tp::one());
    }

    #[test]
    fn disc_sums() {
        let q = line_substitute(&parse_poly("1-x1^2-x2^2").unwrap()).unwrap();
        assert_eq!(q.q, vec![Tp::constant(rat(-4)), Tp::zero(), Tp::one()]);
        let n = newton_sums(&q, 2);
        assert_eq!(n, vec![Tp::constant(rat(2)), Tp::zero(), Tp::constant(rat(8))]);
    }

    #[test]
    fn normalization_is_recorded() {
        let q = line_substitute(&parse_poly("2-2*x1^2-2*x2^2").unwrap()).unwrap();
        assert_eq!(q.normalization, rat(2));
        assert_eq!(q.q[0], Tp::constant(rat(-4)));
    }

    #[test]
    fn odd_x2_powers_give_sine_terms() {
        let q = line_substitute(&parse_poly("1+x2").unwrap()).unwrap();
        assert_eq!(q.q[0], Tp::sin_basis(1));
        assert!(!q.q[0].is_cosine());
    }

    #[test]
    fn displayed_cubic_matrix() {
        let h = hermite_matrix(&parse_poly("1-x1-4*x1^2-x2^2+4*x1^3").unwrap()).unwrap();
        let n2 = Tp::from_i64_cos(&[22, 0, 7]);
        assert_eq!(h.get(0, 0), &Tp::constant(rat(3)));
        assert_eq!(h.get(0, 1), &Tp::cos_basis(1));
        assert_eq!(h.get(0, 2), &n2);
        assert_eq!(h.get(1, 1), &n2);
        assert_eq!(h.get(1, 2), &Tp::from_i64_cos(&[0, 6, 0, -2]));
        assert_eq!(h.get(2, 2), &Tp::from_i64_cos(&[250, 0, 124, 0, 15]));
    }

    #[test]
    fn origin_on_curve_rejected() {
        assert_eq!(line_substitute(&parse_poly("x1-x2^2").unwrap()), Err(Error::OriginOnCurve));
        assert_eq!(line_substitute(&parse_poly("3").unwrap()), Err(Error::DegreeZero));
    }
}
