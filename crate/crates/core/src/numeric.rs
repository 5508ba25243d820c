//! Floating-point root finding and symmetric eigenvalue helpers.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::polycore::UniPoly;

/// Roots farther than this (relative) from the real axis count as complex.
pub const REAL_ROOT_TOL: f64 = 1e-8;

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn polish(c: &[Complex64], mut z: Complex64) -> Complex64 {
    let (mut val, _) = horner(c, z);
    for _ in 0..8 {
        let (p, dp) = horner(c, z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        let (pn, _) = horner(c, next);
        if !pn.norm().is_finite() || pn.norm() >= val.norm() {
            break;
        }
        z = next;
        val = pn;
    }
    z
}

/// Coefficients of `p(z + s)`.
fn taylor_shift(c: &[Complex64], s: Complex64) -> Vec<Complex64> {
    let mut out = c.to_vec();
    let n = out.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let next = out[j + 1];
            out[j] += s * next;
        }
    }
    out
}

/// Eigenvalues of the companion matrix of a monic-normalized polynomial,
/// `None` if the QR iteration does not converge.
fn companion_eigenvalues(c: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = c.len() - 1;
    let lead = c[n];
    if c.iter().all(|v| v.im == 0.0) {
        let comp = DMatrix::from_fn(n, n, |i, j| {
            if j == n - 1 {
                -c[i].re / lead.re
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let schur = Schur::try_new(comp, f64::EPSILON, 2000)?;
        Some(schur.complex_eigenvalues().iter().copied().collect())
    } else {
        let comp = DMatrix::from_fn(n, n, |i, j| {
            if j == n - 1 {
                -c[i] / lead
            } else if i == j + 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let t = Schur::try_new(comp, f64::EPSILON, 2000)?.unpack().1;
        Some((0..n).map(|i| t[(i, i)]).collect())
    }
}

/// Shifts tried in turn when the unshifted companion iteration stalls
/// (symmetric root patterns make plain QR cycle).
const ROOT_SHIFTS: [f64; 4] = [0.0, 0.293_7, -0.611_9, 1.372_3];

/// All complex roots of `Σ c_k z^k` (ascending coefficients) from companion
/// eigenvalues, Newton-polished. Leading and trailing zero coefficients are
/// handled exactly.
pub fn poly_roots_complex(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|v| v.norm() == 0.0) {
        c.pop();
    }
    let zeros = c.iter().take_while(|v| v.norm() == 0.0).count();
    let c = c.split_off(zeros.min(c.len()));
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return roots;
    }
    let raw: Vec<Complex64> = if n == 1 {
        vec![-c[0] / c[1]]
    } else {
        let scale = c.iter().map(|v| v.norm()).fold(0.0, f64::max).powf(1.0 / n as f64).max(1.0);
        ROOT_SHIFTS
            .iter()
            .find_map(|&s| {
                let s = Complex64::new(s * scale, 0.0);
                let shifted = if s.norm() == 0.0 { c.clone() } else { taylor_shift(&c, s) };
                companion_eigenvalues(&shifted).map(|ev| ev.into_iter().map(|z| z + s).collect())
            })
            .unwrap_or_else(|| {
                // complex shift as a last resort; it breaks any real symmetry
                let s = Complex64::new(0.1 * scale, 0.2 * scale);
                let sh = taylor_shift(&c, s);
                let comp = DMatrix::from_fn(n, n, |i, j| {
                    if j == n - 1 {
                        -sh[i] / sh[n]
                    } else if i == j + 1 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                });
                let t = Schur::new(comp).unpack().1;
                (0..n).map(|i| t[(i, i)] + s).collect()
            })
    };
    roots.extend(raw.into_iter().map(|z| polish(&c, z)));
    roots
}

pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    poly_roots_complex(&coeffs.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>())
}

pub fn is_real(z: Complex64, tol: f64) -> bool {
    z.im.abs() <= tol * z.norm().max(1.0)
}

/// Real roots of an exact polynomial with exact multiplicities, ascending.
/// The square-free decomposition is exact, so only simple roots are ever
/// computed numerically.
pub fn real_roots_with_multiplicity(p: &UniPoly) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for (factor, mult) in p.square_free() {
        let c = factor.to_f64();
        for z in poly_roots(&c) {
            if is_real(z, REAL_ROOT_TOL) {
                out.push((z.re, mult));
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Eigenvalues ascending with matching eigenvector columns.
pub fn sym_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (DVector::zeros(0), DMatrix::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = DVector::from_fn(n, |i, _| eig.eigenvalues[idx[i]]);
    let vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    sym_eigen(m).0.iter().copied().collect()
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    sym_eigenvalues(m).first().copied().unwrap_or(f64::INFINITY)
}

/// Spectral norm of a symmetric matrix.
pub fn sym_norm(m: &DMatrix<f64>) -> f64 {
    sym_eigenvalues(m).iter().map(|v| v.abs()).fold(0.0, f64::max)
}
