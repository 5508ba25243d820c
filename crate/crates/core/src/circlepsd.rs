//! Positive semidefiniteness of trigonometric matrices on the unit circle,
//! congruence scaling, SDP export and spectral-factor residuals.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{poly_roots, poly_roots_complex, sym_eigen};
use crate::polycore::{Mat, TrigMatrix, TrigPoly, UniPoly};
use crate::scalar::{format_g17, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CircleStatus {
    PositiveDefinite,
    PositiveSemidefiniteMarginal,
    #[serde(rename = "not-psd")]
    NotPsd,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct CircleVerdict {
    pub status: CircleStatus,
    pub witness_theta: f64,
    pub min_eig: f64,
    pub tol: f64,
    /// Angles in `[0, 2π)` where `det H` vanishes.
    pub circle_roots: Vec<f64>,
    /// The zero-diagonal argument decided the case without a determinant.
    pub shortcut: bool,
}

#[derive(Clone, Debug)]
pub struct CircleOptions {
    /// Absolute tolerance; `None` means `1e-9 × max |coefficient|`.
    pub tol: Option<f64>,
    pub root_tol: f64,
    pub grid: usize,
}

impl Default for CircleOptions {
    fn default() -> Self {
        CircleOptions { tol: None, root_tol: 1e-6, grid: 512 }
    }
}

impl CircleOptions {
    /// Defaults, with `RIGIDCONVEX_TOL` overriding the tolerance.
    pub fn from_env() -> Self {
        let tol = std::env::var("RIGIDCONVEX_TOL").ok().and_then(|v| v.trim().parse::<f64>().ok());
        CircleOptions { tol: tol.filter(|t| *t > 0.0), ..Self::default() }
    }
}

fn zero_diagonal_witness<T: Scalar>(h: &TrigMatrix<T>) -> bool {
    let m = h.size();
    (0..m).any(|i| h.get(i, i).is_zero() && (0..m).any(|j| !h.get(i, j).is_zero()))
}

fn normalize_angle(t: f64) -> f64 {
    let t = t.rem_euclid(2.0 * PI);
    if t >= 2.0 * PI {
        0.0
    } else {
        t
    }
}

/// Angles of the roots of `det H` on the unit circle.
fn circle_root_angles<T: Scalar>(det: &TrigPoly<T>, root_tol: f64) -> Vec<f64> {
    let d = det.half_degree() as i64;
    let mut roots: Vec<Complex64> = Vec::new();
    if det.is_cosine() {
        let coeffs: Vec<Rational> = (-d..=d).map(|k| det.cos_coeff(k.unsigned_abs() as usize).to_rational()).collect();
        for (factor, _) in UniPoly::new(coeffs).square_free() {
            roots.extend(poly_roots(&factor.to_f64()));
        }
    } else {
        let coeffs: Vec<Complex64> = (-d..=d).map(|k| det.laurent_coeff(k)).collect();
        roots = poly_roots_complex(&coeffs);
    }
    let mut angles: Vec<f64> =
        roots.iter().filter(|z| (z.norm() - 1.0).abs() < root_tol).map(|z| normalize_angle(z.arg())).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    angles
}

fn min_eig_at<T: Scalar>(h: &TrigMatrix<T>, theta: f64) -> f64 {
    sym_eigen(&h.eval(theta)).0.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn default_tol<T: Scalar>(h: &TrigMatrix<T>) -> f64 {
    1e-9 * h.max_abs_coeff().max(f64::MIN_POSITIVE)
}

pub fn psd_on_circle<T: Scalar>(h: &TrigMatrix<T>, opts: &CircleOptions) -> CircleVerdict {
    let tol = opts.tol.unwrap_or_else(|| default_tol(h));
    let grid: Vec<f64> = (0..opts.grid).map(|k| 2.0 * PI * k as f64 / opts.grid as f64).collect();
    let scan = |samples: &[f64]| {
        samples.iter().map(|&t| (t, min_eig_at(h, t))).fold((0.0, f64::INFINITY), |best, cur| {
            if cur.1 < best.1 {
                cur
            } else {
                best
            }
        })
    };

    if zero_diagonal_witness(h) {
        let (theta, min_eig) = scan(&grid);
        return CircleVerdict {
            status: CircleStatus::NotPsd,
            witness_theta: theta,
            min_eig,
            tol,
            circle_roots: Vec::new(),
            shortcut: true,
        };
    }

    let det = h.det();
    if det.is_zero() {
        let (theta, min_eig) = scan(&grid);
        let status = if min_eig < -tol { CircleStatus::NotPsd } else { CircleStatus::Inconclusive };
        return CircleVerdict { status, witness_theta: theta, min_eig, tol, circle_roots: Vec::new(), shortcut: false };
    }

    let roots = circle_root_angles(&det, opts.root_tol);
    let mut samples = roots.clone();
    for (k, &a) in roots.iter().enumerate() {
        let b = if k + 1 < roots.len() { roots[k + 1] } else { roots[0] + 2.0 * PI };
        samples.push(normalize_angle(0.5 * (a + b)));
    }
    samples.extend_from_slice(&grid);
    let (theta, min_eig) = scan(&samples);
    let status = if min_eig < -tol {
        CircleStatus::NotPsd
    } else if roots.is_empty() && min_eig > tol {
        CircleStatus::PositiveDefinite
    } else {
        CircleStatus::PositiveSemidefiniteMarginal
    };
    CircleVerdict { status, witness_theta: theta, min_eig, tol, circle_roots: roots, shortcut: false }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleMode {
    /// `H0(e^{iθ0}) = I`.
    Full,
    /// `H0(e^{iθ0})` diagonal.
    Diag,
}

#[derive(Clone, Debug)]
pub struct Scaled {
    pub h0: TrigMatrix<f64>,
    /// `H0 = T H T^T`.
    pub transform: Mat<f64>,
    pub mode: ScaleMode,
}

/// Largest tolerated eigenvalue ratio for the full scaling.
pub const MAX_SCALE_RATIO: f64 = 1e8;

pub fn scale_congruence<T: Scalar>(h: &TrigMatrix<T>, theta0: f64) -> Scaled {
    let m = h.size();
    let at = h.eval(theta0);
    let is_diag = (0..m).all(|i| (0..m).all(|j| i == j || at[(i, j)] == 0.0));
    let (vals, q) = if is_diag {
        (nalgebra::DVector::from_fn(m, |i, _| at[(i, i)]), DMatrix::identity(m, m))
    } else {
        let (vals, mut q) = sym_eigen(&at);
        for c in 0..m {
            let col = q.column(c);
            let big = col.iter().copied().fold(0.0, |acc: f64, v| if v.abs() > acc.abs() { v } else { acc });
            if big < 0.0 {
                q.column_mut(c).neg_mut();
            }
        }
        (vals, q)
    };
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let full = m > 0 && lo > 0.0 && hi / lo <= MAX_SCALE_RATIO;
    let transform = Mat::from_fn(m, m, |i, j| {
        let v = q[(j, i)];
        if full {
            v / vals[i].sqrt()
        } else {
            v
        }
    });
    let h0 = h.to_f64().congruence(&transform);
    Scaled { h0, transform, mode: if full { ScaleMode::Full } else { ScaleMode::Diag } }
}

/// `L(P) = L0 + Σ y_ij A_ij ⪰ 0`, maximize `trace P`.
#[derive(Clone, Debug)]
pub struct SdpProblem<T> {
    pub m: usize,
    pub d: usize,
    pub block_size: usize,
    pub num_vars: usize,
    pub l0: Mat<T>,
    /// `(i, j)` with `i ≤ j < dm` for each variable `y_ij`, in SDPA order.
    pub vars: Vec<(usize, usize)>,
    pub objective: Vec<f64>,
}

impl<T: Scalar> SdpProblem<T> {
    /// Nonzero upper-triangular entries of `A_k`, 0-based.
    pub fn var_entries(&self, k: usize) -> Vec<(usize, usize, i64)> {
        let (i, j) = self.vars[k];
        vec![(i, j, 1), (i + self.m, j + self.m, -1)]
    }

    /// Dense `A_k`.
    pub fn var_matrix(&self, k: usize) -> Mat<T> {
        let mut a = Mat::zeros(self.block_size, self.block_size);
        for (i, j, v) in self.var_entries(k) {
            a[(i, j)] = T::from_i64(v);
            a[(j, i)] = T::from_i64(v);
        }
        a
    }

    /// SDPA sparse format.
    pub fn to_sdpa(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.num_vars).unwrap();
        writeln!(out, "1").unwrap();
        writeln!(out, "{}", self.block_size).unwrap();
        let obj: Vec<String> = self.objective.iter().map(|&v| format_g17(v)).collect();
        writeln!(out, "{}", obj.join(" ")).unwrap();
        for i in 0..self.block_size {
            for j in i..self.block_size {
                let v = self.l0[(i, j)].to_f64();
                if v != 0.0 {
                    writeln!(out, "0 1 {} {} {}", i + 1, j + 1, format_g17(-v)).unwrap();
                }
            }
        }
        for k in 0..self.num_vars {
            for (i, j, v) in self.var_entries(k) {
                writeln!(out, "{} 1 {} {} {}", k + 1, i + 1, j + 1, format_g17(v as f64)).unwrap();
            }
        }
        out
    }

    /// Coefficient of `z^k` in `B(z^{-1})^T L(P) B(z)`, `B = [I; zI; …; z^d I]`,
    /// for a symmetric `l` of block size `(d+1)m`.
    pub fn laurent_block(&self, l: &Mat<T>, k: i64) -> Mat<T> {
        let (m, d) = (self.m, self.d as i64);
        Mat::from_fn(m, m, |r, c| {
            let mut acc = T::zero();
            for bi in 0..=d {
                let bj = bi + k;
                if (0..=d).contains(&bj) {
                    acc = acc + l[(bi as usize * m + r, bj as usize * m + c)].clone();
                }
            }
            acc
        })
    }

    /// Rebuilds `H(z)` from `L0`; fails unless every `z^k` block is
    /// symmetric and `z^{-k}` mirrors `z^k`.
    pub fn reconstruct(&self) -> Result<TrigMatrix<T>> {
        self.reconstruct_from(&self.l0)
    }

    pub fn reconstruct_from(&self, l: &Mat<T>) -> Result<TrigMatrix<T>> {
        let d = self.d as i64;
        let mut blocks = Vec::new();
        for k in 0..=d {
            let pos = self.laurent_block(l, k);
            let neg = self.laurent_block(l, -k);
            if pos != neg.transpose() || !pos.is_symmetric() {
                return Err(Error::Numerical(format!("z^{k} block is not mirrored by z^-{k}")));
            }
            blocks.push(pos);
        }
        Ok(TrigMatrix::from_cos_blocks(&blocks))
    }

    /// `L0 + Σ y_k A_k`.
    pub fn assemble(&self, y: &[T]) -> Mat<T> {
        let mut out = self.l0.clone();
        for (k, yk) in y.iter().enumerate() {
            out = out.add(&self.var_matrix(k).scale(yk));
        }
        out
    }
}

pub fn build_sdp<T: Scalar>(h: &TrigMatrix<T>) -> Result<SdpProblem<T>> {
    if !h.is_cosine() {
        return Err(Error::InvalidInput(
            "SDP export needs real coefficient matrices; H(z) has sine terms (p is odd in x2)".into(),
        ));
    }
    let m = h.size();
    let d = h.half_degree();
    let n = (d + 1) * m;
    let mut l0 = Mat::zeros(n, n);
    for k in 0..=d {
        let blk = h.cos_block(k);
        for i in 0..m {
            for j in 0..m {
                l0[(i, k * m + j)] = blk[(i, j)].clone();
                l0[(k * m + i, j)] = blk[(j, i)].clone();
            }
        }
    }
    let dm = d * m;
    let vars: Vec<(usize, usize)> = (0..dm).flat_map(|i| (i..dm).map(move |j| (i, j))).collect();
    let objective = vars.iter().map(|&(i, j)| if i == j { -1.0 } else { 0.0 }).collect();
    Ok(SdpProblem { m, d, block_size: n, num_vars: vars.len(), l0, vars, objective })
}

/// `U(z) = Σ_k U_k z^k`.
#[derive(Clone, Debug)]
pub struct MatrixPoly {
    pub coeffs: Vec<DMatrix<f64>>,
}

impl MatrixPoly {
    pub fn eval(&self, z: Complex64) -> DMatrix<Complex64> {
        let m = self.coeffs.first().map_or(0, DMatrix::nrows);
        let mut out = DMatrix::<Complex64>::zeros(m, m);
        let mut zk = Complex64::new(1.0, 0.0);
        for c in &self.coeffs {
            out += c.map(|v| Complex64::new(v, 0.0)) * zk;
            zk *= z;
        }
        out
    }

    /// Schema: `{"m": int, "coeffs": [U0, U1, …]}` with numeric entries.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidInput(format!("factor JSON: {msg}"));
        let coeffs = v.get("coeffs").and_then(|c| c.as_array()).ok_or_else(|| bad("missing `coeffs` array"))?;
        let mut out = Vec::new();
        for c in coeffs {
            let mat = crate::polycore::pencil::parse_matrix(c)?;
            out.push(mat.map(Scalar::to_f64).to_dmatrix());
        }
        if out.is_empty() {
            return Err(bad("`coeffs` is empty"));
        }
        let m = out[0].nrows();
        if let Some(bad_m) = out.iter().find(|c| c.nrows() != m) {
            return Err(Error::DimensionMismatch { expected: m, found: bad_m.nrows() });
        }
        if let Some(declared) = v.get("m").and_then(|x| x.as_u64()) {
            if declared as usize != m {
                return Err(Error::DimensionMismatch { expected: declared as usize, found: m });
            }
        }
        Ok(MatrixPoly { coeffs: out })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorResidual {
    pub max_residual: f64,
    pub relative_residual: f64,
    pub pass: bool,
}

pub const FACTOR_GRID: usize = 256;

pub fn verify_spectral_factor<T: Scalar>(h: &TrigMatrix<T>, u: &MatrixPoly, tol: f64) -> Result<FactorResidual> {
    let m = h.size();
    if let Some(c) = u.coeffs.iter().find(|c| c.nrows() != m || c.ncols() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: c.nrows() });
    }
    let deg = u.coeffs.len().saturating_sub(1);
    if deg > h.half_degree() {
        return Err(Error::DimensionMismatch { expected: h.half_degree(), found: deg });
    }
    let (mut max_res, mut max_h) = (0.0f64, 0.0f64);
    for k in 0..FACTOR_GRID {
        let theta = 2.0 * PI * k as f64 / FACTOR_GRID as f64;
        let z = Complex64::from_polar(1.0, theta);
        let hv = h.eval(theta).map(|v| Complex64::new(v, 0.0));
        let prod = u.eval(z.inv()).transpose() * u.eval(z);
        max_res = max_res.max((&hv - prod).norm());
        max_h = max_h.max(hv.norm());
    }
    let relative = if max_h > 0.0 { max_res / max_h } else { max_res };
    Ok(FactorResidual { max_residual: max_res, relative_residual: relative, pass: relative <= tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    type Tp = TrigPoly<Rational>;

    #[test]
    fn marginal_scalar() {
        let h = TrigMatrix::symmetric(1, |_, _| Tp::from_i64_cos(&[2, 1]));
        let v = psd_on_circle(&h, &CircleOptions::default());
        assert_eq!(v.status, CircleStatus::PositiveSemidefiniteMarginal);
        assert!((v.witness_theta - PI).abs() < 1e-9);
        assert!(v.min_eig.abs() < 1e-12);
    }

    #[test]
    fn definite_and_indefinite_scalars() {
        let pd = TrigMatrix::symmetric(1, |_, _| Tp::from_i64_cos(&[3, 1]));
        assert_eq!(psd_on_circle(&pd, &CircleOptions::default()).status, CircleStatus::PositiveDefinite);
        let ind = TrigMatrix::symmetric(1, |_, _| Tp::from_i64_cos(&[1, 1]));
        let v = psd_on_circle(&ind, &CircleOptions::default());
        assert_eq!(v.status, CircleStatus::NotPsd);
        assert!((v.witness_theta - PI).abs() < 1e-9 && (v.min_eig + 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_everywhere_is_inconclusive() {
        let h = TrigMatrix::symmetric(2, |_, _| Tp::from_i64_cos(&[2, 1]));
        assert_eq!(psd_on_circle(&h, &CircleOptions::default()).status, CircleStatus::Inconclusive);
    }

    #[test]
    fn identity_scaling_is_trivial() {
        let h = TrigMatrix::from_mat(&Mat::<Rational>::identity(3));
        let s = scale_congruence(&h, 0.0);
        assert_eq!(s.mode, ScaleMode::Full);
        assert_eq!(s.transform, Mat::identity(3));
        assert_eq!(s.h0, h.to_f64());
    }

    #[test]
    fn scalar_sdp_is_trivial() {
        let h = TrigMatrix::from_mat(&Mat::<Rational>::from_i64_rows(&[&[3]]));
        let sdp = build_sdp(&h).unwrap();
        assert_eq!((sdp.block_size, sdp.num_vars), (1, 0));
        assert_eq!(sdp.l0[(0, 0)], rat(3));
        assert_eq!(sdp.to_sdpa(), "0\n1\n1\n\n0 1 1 1 -3\n");
    }

    #[test]
    fn trivial_factors() {
        let h = TrigMatrix::symmetric(1, |_, _| Tp::from_i64_cos(&[2, 1]));
        let u = MatrixPoly { coeffs: vec![DMatrix::from_element(1, 1, 1.0), DMatrix::from_element(1, 1, 1.0)] };
        let r = verify_spectral_factor(&h, &u, 1e-12).unwrap();
        assert!(r.pass && r.max_residual < 1e-14);
        let id = TrigMatrix::from_mat(&Mat::<Rational>::identity(2));
        let u = MatrixPoly { coeffs: vec![DMatrix::identity(2, 2)] };
        assert_eq!(verify_spectral_factor(&id, &u, 1e-12).unwrap().max_residual, 0.0);
        let wrong = MatrixPoly { coeffs: vec![DMatrix::identity(3, 3)] };
        assert!(matches!(verify_spectral_factor(&id, &wrong, 1e-12), Err(Error::DimensionMismatch { .. })));
    }
}
