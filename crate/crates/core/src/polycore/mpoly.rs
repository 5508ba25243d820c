//! Dense-exponent multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::scalar::{rational_to_f64, rational_to_string, Rational};

/// Polynomial in `N` variables, stored as a map from exponent vectors to
/// nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly<const N: usize> {
    terms: BTreeMap<[u32; N], Rational>,
}

/// Polynomial in `x1, x2`.
pub type BivarPoly = MPoly<2>;
/// Polynomial in three variables (`x1, x2, x3`, or `x0, x1, x2` for
/// homogeneous forms).
pub type TriPoly = MPoly<3>;

impl<const N: usize> MPoly<N> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0; N], c)
    }

    pub fn monomial(exp: [u32; N], c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        MPoly { terms }
    }

    /// The variable with index `i` (0-based).
    pub fn var(i: usize) -> Self {
        let mut e = [0; N];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = ([u32; N], Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: [u32; N], c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>() as i32).max().unwrap_or(-1)
    }

    /// Degree in variable `i`; `-1` for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> i32 {
        self.terms.keys().map(|e| e[i] as i32).max().unwrap_or(-1)
    }

    pub fn coeff(&self, exp: &[u32; N]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; N], &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&[0; N])
    }

    pub fn is_homogeneous(&self, deg: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == deg)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                out.add_term(f, c * Rational::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Exact evaluation.
    pub fn eval(&self, x: &[Rational; N]) -> Rational {
        let max_deg: Vec<u32> = (0..N).map(|i| self.degree_in(i).max(0) as u32).collect();
        let powers: Vec<Vec<Rational>> = (0..N)
            .map(|i| {
                let mut pw = vec![Rational::one()];
                for k in 1..=max_deg[i] as usize {
                    let next = &pw[k - 1] * &x[i];
                    pw.push(next);
                }
                pw
            })
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.clone();
                for i in 0..N {
                    t *= &powers[i][e[i] as usize];
                }
                t
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn eval_f64(&self, x: &[f64; N]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = rational_to_f64(c);
                for i in 0..N {
                    t *= x[i].powi(e[i] as i32);
                }
                t
            })
            .sum()
    }

    /// Largest coefficient magnitude.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| rational_to_f64(c).abs()).fold(0.0, f64::max)
    }

    /// Sum of coefficient magnitudes.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| rational_to_f64(c).abs()).sum()
    }

    /// Replaces every variable `x_i` by `x_i + shift_i`.
    pub fn translate(&self, shift: &[Rational; N]) -> Self {
        let shifted: Vec<MPoly<N>> =
            (0..N).map(|i| &Self::var(i) + &Self::constant(shift[i].clone())).collect();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for i in 0..N {
                if e[i] > 0 {
                    t = &t * &shifted[i].pow(e[i]);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Writes the polynomial using the given variable names.
    pub fn fmt_with(&self, names: &[&str; N], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<&[u32; N]> = self.terms.keys().collect();
        keys.sort_by_key(|e| (e.iter().sum::<u32>(), std::cmp::Reverse(**e)));
        for (idx, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mag = c.abs();
            let is_const = e.iter().all(|&k| k == 0);
            let mut first = true;
            if !mag.is_one() || is_const {
                write!(f, "{}", rational_to_string(&mag))?;
                first = false;
            }
            for i in 0..N {
                if e[i] == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", names[i])?;
                if e[i] > 1 {
                    write!(f, "^{}", e[i])?;
                }
            }
        }
        Ok(())
    }

    pub fn to_string_with(&self, names: &[&str; N]) -> String {
        struct W<'a, const N: usize>(&'a MPoly<N>, &'a [&'a str; N]);
        impl<const N: usize> fmt::Display for W<'_, N> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(self.1, f)
            }
        }
        W(self, names).to_string()
    }
}

impl BivarPoly {
    /// Evaluates at a 2-D point.
    pub fn eval2(&self, x1: &Rational, x2: &Rational) -> Rational {
        self.eval(&[x1.clone(), x2.clone()])
    }

    /// Lifts to three variables with `x3` absent.
    pub fn to_tri(&self) -> TriPoly {
        TriPoly::from_terms(self.terms().map(|(e, c)| ([e[0], e[1], 0], c.clone())))
    }

    /// Swaps `x1` and `x2`.
    pub fn swap_vars(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| ([e[1], e[0]], c.clone())))
    }

    /// Coefficients in `x1` after fixing `x2` numerically, ascending.
    pub fn coeffs_in_x1_at(&self, x2: f64) -> Vec<f64> {
        let d = self.degree_in(0).max(0) as usize;
        let mut out = vec![0.0; d + 1];
        for (e, c) in self.terms() {
            out[e[0] as usize] += rational_to_f64(c) * x2.powi(e[1] as i32);
        }
        out
    }
}

impl TriPoly {
    /// Drops to two variables if `x3` does not occur.
    pub fn to_bivariate(&self) -> Option<BivarPoly> {
        if self.degree_in(2) > 0 {
            return None;
        }
        Some(BivarPoly::from_terms(self.terms().map(|(e, c)| ([e[0], e[1]], c.clone()))))
    }
}

impl fmt::Display for MPoly<2> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(&["x1", "x2"], f)
    }
}

impl fmt::Display for MPoly<3> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(&["x1", "x2", "x3"], f)
    }
}

impl<const N: usize> fmt::Debug for MPoly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=N).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let arr: [&str; N] = refs.try_into().expect("N names");
        write!(f, "MPoly(")?;
        self.fmt_with(&arr, f)?;
        write!(f, ")")
    }
}

impl<const N: usize> Add for &MPoly<N> {
    type Output = MPoly<N>;
    fn add(self, rhs: &MPoly<N>) -> MPoly<N> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<const N: usize> Sub for &MPoly<N> {
    type Output = MPoly<N>;
    fn sub(self, rhs: &MPoly<N>) -> MPoly<N> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<const N: usize> Mul for &MPoly<N> {
    type Output = MPoly<N>;
    fn mul(self, rhs: &MPoly<N>) -> MPoly<N> {
        let mut out = MPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for i in 0..N {
                    e[i] += eb[i];
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl<const N: usize> Neg for &MPoly<N> {
    type Output = MPoly<N>;
    fn neg(self) -> MPoly<N> {
        MPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<const N: usize> $tr for MPoly<N> {
            type Output = MPoly<N>;
            fn $m(self, rhs: MPoly<N>) -> MPoly<N> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<const N: usize> Neg for MPoly<N> {
    type Output = MPoly<N>;
    fn neg(self) -> MPoly<N> {
        -&self
    }
}

impl<const N: usize> Zero for MPoly<N> {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<const N: usize> One for MPoly<N> {
    fn one() -> Self {
        MPoly::constant(Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn x() -> BivarPoly {
        BivarPoly::var(0)
    }
    fn y() -> BivarPoly {
        BivarPoly::var(1)
    }

    #[test]
    fn zero_has_sentinel_degree() {
        let z = BivarPoly::zero();
        assert_eq!(z.degree(), -1);
        assert!(z.is_zero());
        let cancel = &x() - &x();
        assert!(cancel.is_zero());
        assert_eq!(cancel.num_terms(), 0);
    }

    #[test]
    fn degree_tracks_stored_keys() {
        let p = &(&x().pow(3) * &y()) + &BivarPoly::constant(rat(2));
        assert_eq!(p.degree(), 4);
        assert_eq!(p.degree_in(0), 3);
        assert_eq!(p.degree_in(1), 1);
    }

    #[test]
    fn capricorn_eval() {
        let s = &x().pow(2) + &y().pow(2);
        let inner = &s - &y();
        let p = &(&x().pow(2) * &s) - &inner.pow(2).scale(&rat(2));
        assert_eq!(p.eval2(&rat(0), &ratio(1, 2)), ratio(-1, 8));
        assert_eq!(p.eval2(&rat(0), &rat(0)), p.constant_term());
    }

    #[test]
    fn tv_vanishes_at_unit_point() {
        let p = &(&BivarPoly::constant(rat(1)) - &x().pow(4)) - &y().pow(4);
        assert_eq!(p.eval2(&rat(1), &rat(0)), rat(0));
    }

    #[test]
    fn derivative_and_translate() {
        let p = &x().pow(3) + &(&x() * &y());
        assert_eq!(p.derivative(0), &x().pow(2).scale(&rat(3)) + &y());
        let q = p.translate(&[rat(1), rat(0)]);
        assert_eq!(q.eval2(&rat(0), &rat(2)), p.eval2(&rat(1), &rat(2)));
    }

    #[test]
    fn display_is_graded() {
        let p = &(&BivarPoly::constant(rat(1)) - &x()) + &x().pow(3).scale(&ratio(3, 4));
        assert_eq!(p.to_string(), "1 - x1 + 0.75*x1^3");
        assert_eq!((-&x()).to_string(), "-x1");
        assert_eq!(BivarPoly::zero().to_string(), "0");
    }
}
