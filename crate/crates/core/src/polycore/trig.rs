//! Real-valued trigonometric polynomials in `z = e^{iθ}`.
//!
//! A [`TrigPoly`] is `c0 + Σ c_k (z^k + z^{-k}) + Σ s_k i(z^{-k} − z^k)`,
//! which evaluates on the circle to `c0 + 2Σ c_k cos kθ + 2Σ s_k sin kθ`.
//! Polynomials even in `x2` only ever produce the cosine part; odd powers of
//! `x2` under the line substitution bring in sine terms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::matrix::{det_laplace, Mat};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct TrigPoly<T> {
    cos: Vec<T>,
    /// `sin[0]` is a placeholder kept at zero so indices line up.
    sin: Vec<T>,
}

fn trim<T: Scalar>(v: &mut Vec<T>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

impl<T: Scalar> TrigPoly<T> {
    pub fn new(mut cos: Vec<T>, mut sin: Vec<T>) -> Self {
        if let Some(s0) = sin.first_mut() {
            *s0 = T::zero();
        }
        trim(&mut cos);
        trim(&mut sin);
        TrigPoly { cos, sin }
    }

    /// Pure cosine polynomial `c[0] + Σ c[k](z^k + z^{-k})`.
    pub fn from_cos(cos: Vec<T>) -> Self {
        Self::new(cos, Vec::new())
    }

    pub fn constant(c: T) -> Self {
        Self::from_cos(vec![c])
    }

    pub fn from_i64_cos(c: &[i64]) -> Self {
        Self::from_cos(c.iter().map(|&v| T::from_i64(v)).collect())
    }

    /// `z^k + z^{-k}` (the constant 2 for `k = 0`).
    pub fn cos_basis(k: usize) -> Self {
        let mut c = vec![T::zero(); k + 1];
        c[k] = if k == 0 { T::from_i64(2) } else { T::one() };
        Self::from_cos(c)
    }

    /// `i(z^{-k} − z^k)` (zero for `k = 0`).
    pub fn sin_basis(k: usize) -> Self {
        let mut s = vec![T::zero(); k + 1];
        if k > 0 {
            s[k] = T::one();
        }
        Self::new(Vec::new(), s)
    }

    pub fn cos_coeffs(&self) -> &[T] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[T] {
        &self.sin
    }

    pub fn cos_coeff(&self, k: usize) -> T {
        self.cos.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn sin_coeff(&self, k: usize) -> T {
        self.sin.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_cosine(&self) -> bool {
        self.sin.is_empty()
    }

    /// Largest `k` with a nonzero `z^k` coefficient (0 for constants and zero).
    pub fn half_degree(&self) -> usize {
        self.cos.len().max(self.sin.len()).saturating_sub(1)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut v = self.cos_coeff(0).to_f64();
        for (k, c) in self.cos.iter().enumerate().skip(1) {
            v += 2.0 * c.to_f64() * (k as f64 * theta).cos();
        }
        for (k, s) in self.sin.iter().enumerate().skip(1) {
            v += 2.0 * s.to_f64() * (k as f64 * theta).sin();
        }
        v
    }

    /// Coefficient of `z^k` as a complex number, for `-d ≤ k ≤ d`.
    pub fn laurent_coeff(&self, k: i64) -> Complex64 {
        let a = k.unsigned_abs() as usize;
        let c = self.cos_coeff(a).to_f64();
        let s = self.sin_coeff(a).to_f64();
        match k.signum() {
            0 => Complex64::new(c, 0.0),
            1 => Complex64::new(c, -s),
            _ => Complex64::new(c, s),
        }
    }

    /// Value at an arbitrary complex `z` through the Laurent form.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let d = self.half_degree() as i64;
        (-d..=d).map(|k| self.laurent_coeff(k) * z.powi(k as i32)).sum()
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(
            self.cos.iter().map(|v| v.clone() * c.clone()).collect(),
            self.sin.iter().map(|v| v.clone() * c.clone()).collect(),
        )
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> TrigPoly<U> {
        TrigPoly::new(self.cos.iter().map(&f).collect(), self.sin.iter().map(&f).collect())
    }

    pub fn to_f64(&self) -> TrigPoly<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.cos.iter().chain(self.sin.iter()).map(Scalar::abs_f64).fold(0.0, f64::max)
    }
}

fn bump<T: Scalar>(v: &mut Vec<T>, k: usize, x: T) {
    if v.len() <= k {
        v.resize(k + 1, T::zero());
    }
    v[k] = v[k].clone() + x;
}

impl<T: Scalar> Add for &TrigPoly<T> {
    type Output = TrigPoly<T>;
    fn add(self, rhs: &TrigPoly<T>) -> TrigPoly<T> {
        let nc = self.cos.len().max(rhs.cos.len());
        let ns = self.sin.len().max(rhs.sin.len());
        TrigPoly::new(
            (0..nc).map(|k| self.cos_coeff(k) + rhs.cos_coeff(k)).collect(),
            (0..ns).map(|k| self.sin_coeff(k) + rhs.sin_coeff(k)).collect(),
        )
    }
}

impl<T: Scalar> Sub for &TrigPoly<T> {
    type Output = TrigPoly<T>;
    fn sub(self, rhs: &TrigPoly<T>) -> TrigPoly<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Neg for &TrigPoly<T> {
    type Output = TrigPoly<T>;
    fn neg(self) -> TrigPoly<T> {
        self.map(|v| -v.clone())
    }
}

impl<T: Scalar> Mul for &TrigPoly<T> {
    type Output = TrigPoly<T>;
    fn mul(self, rhs: &TrigPoly<T>) -> TrigPoly<T> {
        let n = self.half_degree() + rhs.half_degree() + 1;
        let mut cos = vec![T::zero(); n];
        let mut sin = vec![T::zero(); n];
        // C_a C_b = C_{a+b} + C_{|a-b|}, S_a S_b = C_{|a-b|} - C_{a+b},
        // C_a S_b = S_{a+b} - S_{a-b}, with C_0 = 2, S_0 = 0, S_{-k} = -S_k.
        let add_c = |cos: &mut Vec<T>, k: usize, v: T| {
            let v = if k == 0 { v.clone() + v } else { v };
            bump(cos, k, v);
        };
        let add_s = |sin: &mut Vec<T>, k: i64, v: T| match k.signum() {
            1 => bump(sin, k as usize, v),
            -1 => bump(sin, (-k) as usize, -v),
            _ => {}
        };
        let cos_times_sin = |sin: &mut Vec<T>, a: usize, b: usize, v: T| {
            if a == 0 {
                add_s(sin, b as i64, v);
            } else {
                add_s(sin, (a + b) as i64, v.clone());
                add_s(sin, a as i64 - b as i64, -v);
            }
        };
        for (a, x) in self.cos.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, y) in rhs.cos.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let v = x.clone() * y.clone();
                if a == 0 || b == 0 {
                    bump(&mut cos, a + b, v);
                } else {
                    add_c(&mut cos, a + b, v.clone());
                    add_c(&mut cos, a.abs_diff(b), v);
                }
            }
            for (b, y) in rhs.sin.iter().enumerate().skip(1).filter(|(_, v)| !v.is_zero()) {
                cos_times_sin(&mut sin, a, b, x.clone() * y.clone());
            }
        }
        for (a, x) in self.sin.iter().enumerate().skip(1).filter(|(_, v)| !v.is_zero()) {
            for (b, y) in rhs.cos.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                cos_times_sin(&mut sin, b, a, x.clone() * y.clone());
            }
            for (b, y) in rhs.sin.iter().enumerate().skip(1).filter(|(_, v)| !v.is_zero()) {
                let v = x.clone() * y.clone();
                add_c(&mut cos, a.abs_diff(b), v.clone());
                add_c(&mut cos, a + b, -v);
            }
        }
        TrigPoly::new(cos, sin)
    }
}

macro_rules! owned_ops {
    ($($tr:ident :: $m:ident),*) => {$(
        impl<T: Scalar> $tr for TrigPoly<T> {
            type Output = TrigPoly<T>;
            fn $m(self, rhs: TrigPoly<T>) -> TrigPoly<T> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul);

impl<T: Scalar> Neg for TrigPoly<T> {
    type Output = TrigPoly<T>;
    fn neg(self) -> TrigPoly<T> {
        -&self
    }
}

impl<T: Scalar> Zero for TrigPoly<T> {
    fn zero() -> Self {
        TrigPoly { cos: Vec::new(), sin: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.cos.is_empty() && self.sin.is_empty()
    }
}

impl<T: Scalar> One for TrigPoly<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

impl<T: Scalar> fmt::Display for TrigPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.cos.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            parts.push(match k {
                0 => format!("{c}"),
                1 => format!("{c}*(z+z^-1)"),
                _ => format!("{c}*(z^{k}+z^-{k})"),
            });
        }
        for (k, s) in self.sin.iter().enumerate().skip(1).filter(|(_, s)| !s.is_zero()) {
            parts.push(if k == 1 { format!("{s}*i(z^-1-z)") } else { format!("{s}*i(z^-{k}-z^{k})") });
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

impl<T: Scalar> fmt::Debug for TrigPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TrigPoly({self})")
    }
}

/// Symmetric matrix of trigonometric polynomials, `H(z)`.
#[derive(Clone, PartialEq)]
pub struct TrigMatrix<T> {
    m: usize,
    entries: Vec<TrigPoly<T>>,
}

impl<T: Scalar> TrigMatrix<T> {
    /// Builds a symmetric matrix from its upper triangle.
    pub fn symmetric(m: usize, f: impl Fn(usize, usize) -> TrigPoly<T>) -> Self {
        let mut entries = vec![TrigPoly::zero(); m * m];
        for i in 0..m {
            for j in i..m {
                let v = f(i, j);
                entries[j * m + i] = v.clone();
                entries[i * m + j] = v;
            }
        }
        TrigMatrix { m, entries }
    }

    /// Constant matrix.
    pub fn from_mat(a: &Mat<T>) -> Self {
        Self::symmetric(a.rows(), |i, j| TrigPoly::constant(a[(i, j)].clone()))
    }

    /// Assembles `H0 + Σ_k (H_k z^k + H_k^T z^{-k})` from cosine coefficient
    /// matrices only (every `H_k` symmetric).
    pub fn from_cos_blocks(blocks: &[Mat<T>]) -> Self {
        let m = blocks.first().map_or(0, Mat::rows);
        Self::symmetric(m, |i, j| TrigPoly::from_cos(blocks.iter().map(|b| b[(i, j)].clone()).collect()))
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &TrigPoly<T> {
        &self.entries[i * self.m + j]
    }

    pub fn half_degree(&self) -> usize {
        self.entries.iter().map(TrigPoly::half_degree).max().unwrap_or(0)
    }

    pub fn is_cosine(&self) -> bool {
        self.entries.iter().all(TrigPoly::is_cosine)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.entries.iter().map(TrigPoly::max_abs_coeff).fold(0.0, f64::max)
    }

    /// `H(e^{iθ})`, a real symmetric matrix.
    pub fn eval(&self, theta: f64) -> DMatrix<f64> {
        DMatrix::from_fn(self.m, self.m, |i, j| self.get(i, j).eval(theta))
    }

    /// Cosine coefficient block `k`: the matrix multiplying `z^k + z^{-k}`
    /// (or the constant term for `k = 0`).
    pub fn cos_block(&self, k: usize) -> Mat<T> {
        Mat::from_fn(self.m, self.m, |i, j| self.get(i, j).cos_coeff(k))
    }

    pub fn sin_block(&self, k: usize) -> Mat<T> {
        Mat::from_fn(self.m, self.m, |i, j| self.get(i, j).sin_coeff(k))
    }

    /// Coefficient of `z^k` as a complex matrix.
    pub fn laurent_block(&self, k: i64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.m, self.m, |i, j| self.get(i, j).laurent_coeff(k))
    }

    /// Exact determinant as a trigonometric polynomial.
    pub fn det(&self) -> TrigPoly<T> {
        let rows: Vec<Vec<TrigPoly<T>>> =
            (0..self.m).map(|i| (0..self.m).map(|j| self.get(i, j).clone()).collect()).collect();
        det_laplace(&rows)
    }

    /// Congruence `V H(z) V^T` by a constant matrix.
    pub fn congruence(&self, v: &Mat<T>) -> TrigMatrix<T> {
        let m = self.m;
        let n = v.rows();
        TrigMatrix::symmetric(n, |a, b| {
            let mut acc = TrigPoly::zero();
            for i in 0..m {
                if v[(a, i)].is_zero() {
                    continue;
                }
                for j in 0..m {
                    let w = v[(a, i)].clone() * v[(b, j)].clone();
                    if !w.is_zero() {
                        acc = &acc + &self.get(i, j).scale(&w);
                    }
                }
            }
            acc
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> TrigMatrix<U> {
        TrigMatrix { m: self.m, entries: self.entries.iter().map(|e| e.map(f)).collect() }
    }

    pub fn to_f64(&self) -> TrigMatrix<f64> {
        self.map(Scalar::to_f64)
    }
}

impl<T: Scalar> fmt::Display for TrigMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m {
            let row: Vec<String> = (0..self.m).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Debug for TrigMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TrigMatrix(\n{self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    type Tp = TrigPoly<Rational>;

    #[test]
    fn cosine_square_and_cube() {
        let c1 = Tp::cos_basis(1);
        assert_eq!(&c1 * &c1, Tp::from_i64_cos(&[2, 0, 1]));
        assert_eq!(&(&c1 * &c1) * &c1, Tp::from_i64_cos(&[0, 3, 0, 1]));
        assert_eq!(&c1 * &Tp::one(), c1);
    }

    #[test]
    fn sine_identities() {
        let s1 = Tp::sin_basis(1);
        let c1 = Tp::cos_basis(1);
        // x1^2 + x2^2 on the substituted line
        assert_eq!(&(&c1 * &c1) + &(&s1 * &s1), Tp::constant(rat(4)));
        // C1 S1 = S2
        assert_eq!(&c1 * &s1, Tp::sin_basis(2));
        assert!((&s1 * &s1).is_cosine());
    }

    #[test]
    fn product_matches_pointwise() {
        let a = Tp::new(vec![rat(1), rat(-2), rat(3)], vec![rat(0), rat(5)]);
        let b = Tp::new(vec![rat(0), rat(1)], vec![rat(0), rat(-1), rat(2)]);
        let ab = &a * &b;
        for k in 0..50 {
            let th = k as f64 * 0.37 - 3.0;
            let lhs = ab.eval(th);
            let rhs = a.eval(th) * b.eval(th);
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()));
            let z = Complex64::from_polar(1.0, th);
            assert!((ab.eval_complex(z).re - lhs).abs() < 1e-9);
            assert!(ab.eval_complex(z).im.abs() < 1e-9);
        }
    }

    #[test]
    fn determinant_of_constant_matrix() {
        let m = Mat::<Rational>::from_i64_rows(&[&[2, 1], &[1, 3]]);
        let h = TrigMatrix::from_mat(&m);
        assert_eq!(h.det(), Tp::constant(rat(5)));
    }

    #[test]
    fn display_is_readable() {
        let p = Tp::from_i64_cos(&[22, 0, 7]);
        assert_eq!(p.to_string(), "22 + 7*(z^2+z^-2)");
        let q = Tp::new(vec![], vec![rat(0), rat(-1)]);
        assert_eq!(q.to_string(), "-1*i(z^-1-z)");
    }
}
