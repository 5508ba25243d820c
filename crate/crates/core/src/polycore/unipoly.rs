//! Univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::scalar::{rational_to_f64, rational_to_string, Rational};

/// Ascending coefficient list with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `u`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `u^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i32 {
        self.coeffs.len() as i32 - 1
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, u: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * u + c)
    }

    pub fn eval_f64(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * u + rational_to_f64(c))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer((k as i64).into()))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = d.degree() as usize;
        let lc = d.leading();
        if self.degree() < d.degree() {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Yun's square-free decomposition: returns `(factor, multiplicity)` with
    /// pairwise coprime, square-free, monic, non-constant factors.
    pub fn square_free(&self) -> Vec<(UniPoly, usize)> {
        let mut out = Vec::new();
        if self.degree() < 1 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.div_rem(&a).0;
        let mut c = df.div_rem(&a).0;
        let mut d = &c - &b.derivative();
        let mut k = 1;
        while b.degree() >= 1 {
            a = b.gcd(&d);
            if a.degree() >= 1 {
                out.push((a.clone(), k));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = &c - &b.derivative();
            k += 1;
        }
        out
    }

    /// Composes `self(u + s)`.
    pub fn shift(&self, s: &Rational) -> UniPoly {
        let lin = UniPoly::new(vec![s.clone(), Rational::one()]);
        self.coeffs.iter().rev().fold(UniPoly::zero(), |acc, c| &(&acc * &lin) + &UniPoly::constant(c.clone()))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mag = c.abs();
            match k {
                0 => write!(f, "{}", rational_to_string(&mag))?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", rational_to_string(&mag))?;
                    }
                    write!(f, "u")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}
