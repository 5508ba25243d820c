//! Small dense matrices over a [`Scalar`], plus division-free determinants
//! over arbitrary commutative rings.

use std::ops::{Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Commutative ring with unit: anything a Laplace expansion can run over.
pub trait Ring: Clone + Zero + One + Sub<Output = Self> + Mul<Output = Self> {}
impl<R: Clone + Zero + One + Sub<Output = R> + Mul<Output = R>> Ring for R {}

/// Determinant by Laplace expansion memoized over column subsets:
/// `O(n 2^n)` ring multiplications, no division.
pub fn det_laplace<R: Ring>(a: &[Vec<R>]) -> R {
    let n = a.len();
    if n == 0 {
        return R::one();
    }
    let mut memo: Vec<R> = vec![R::zero(); 1 << n];
    memo[0] = R::one();
    for mask in 1usize..(1 << n) {
        let r = mask.count_ones() as usize - 1;
        let mut acc = R::zero();
        let mut pos = 0;
        for j in 0..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            let minor = &memo[mask ^ (1 << j)];
            if !minor.is_zero() && !a[r][j].is_zero() {
                let term = a[r][j].clone() * minor.clone();
                acc = if (r + pos).is_multiple_of(2) { acc + term } else { acc - term };
            }
            pos += 1;
        }
        memo[mask] = acc;
    }
    memo.pop().expect("full mask")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch { expected: c, found: bad.len() });
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| T::from_i64(v)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[T]>::to_vec).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + other[(i, j)].clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - other[(i, j)].clone())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self[(i, k)].clone() * other[(k, j)].clone())
        })
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_f64())
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().powi(2)).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    /// Determinant by Gaussian elimination (exact for `Rational`).
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = T::one();
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[r][col].is_zero())
                .max_by(|&x, &y| a[x][col].abs_f64().total_cmp(&a[y][col].abs_f64()));
            let Some(p) = pivot else { return T::zero() };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let pv = a[col][col].clone();
            det = det * pv.clone();
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone() / pv.clone();
                let pivot_row = a[col].clone();
                for (v, p) in a[r].iter_mut().zip(pivot_row).skip(col) {
                    *v = v.clone() - f.clone() * p;
                }
            }
        }
        det
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.rows;
        if !self.is_square() || b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.len() });
        }
        let mut a = self.to_rows();
        let mut rhs = b.to_vec();
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[r][col].is_zero())
                .max_by(|&x, &y| a[x][col].abs_f64().total_cmp(&a[y][col].abs_f64()))
                .ok_or_else(|| Error::Numerical("singular linear system".into()))?;
            a.swap(pivot, col);
            rhs.swap(pivot, col);
            let pv = a[col][col].clone();
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone() / pv.clone();
                let pivot_row = a[col].clone();
                for (v, p) in a[r].iter_mut().zip(pivot_row).skip(col) {
                    *v = v.clone() - f.clone() * p;
                }
                let delta = f * rhs[col].clone();
                rhs[r] = rhs[r].clone() - delta;
            }
        }
        Ok((0..n).map(|i| rhs[i].clone() / a[i][i].clone()).collect())
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}
