//! Locating a point where a pencil is positive semidefinite: critical and
//! boundary points of `det F`, found by resultant elimination, then checked
//! through the signs of characteristic-polynomial coefficients.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{is_real, poly_roots, real_roots_with_multiplicity, sym_eigen};
use crate::polycore::interp::interpolate_univariate;
use crate::polycore::{BivarPoly, Mat, Pencil, UniPoly};
use crate::scalar::{rat, Rational, Scalar};

/// Coefficients of `f` as a polynomial in `x1`, each a polynomial in `x2`.
fn x1_coeffs(f: &BivarPoly) -> Vec<UniPoly> {
    let d = f.degree_in(0).max(0) as usize;
    let mut cs = vec![Vec::<Rational>::new(); d + 1];
    for (&[a, b], c) in f.terms() {
        let v = &mut cs[a as usize];
        if v.len() <= b as usize {
            v.resize(b as usize + 1, rat(0));
        }
        v[b as usize] = c.clone();
    }
    cs.into_iter().map(UniPoly::new).collect()
}

/// Sylvester determinant of two ascending coefficient lists of formal
/// degrees `len − 1`.
fn sylvester_det(f: &[Rational], g: &[Rational]) -> Rational {
    let (df, dg) = (f.len() - 1, g.len() - 1);
    let n = df + dg;
    if n == 0 {
        return rat(1);
    }
    let mut s = Mat::<Rational>::zeros(n, n);
    for r in 0..dg {
        for (k, c) in f.iter().rev().enumerate() {
            s[(r, r + k)] = c.clone();
        }
    }
    for r in 0..df {
        for (k, c) in g.iter().rev().enumerate() {
            s[(dg + r, r + k)] = c.clone();
        }
    }
    s.det()
}

/// `Res_{x1}(f, g)` as a polynomial in `x2`, by exact evaluation at integer
/// `x2` and interpolation.
pub fn resultant_elim_x1(f: &BivarPoly, g: &BivarPoly) -> Result<UniPoly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let (fc, gc) = (x1_coeffs(f), x1_coeffs(g));
    let (df, dg) = (fc.len() - 1, gc.len() - 1);
    if df == 0 && dg == 0 {
        return Err(Error::DegreeZero);
    }
    let bound = (f.degree() as usize) * (g.degree() as usize);
    let xs: Vec<Rational> = (0..=bound as i64).map(|k| rat(k - (bound as i64) / 2)).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|x| {
            let fv: Vec<Rational> = fc.iter().map(|c| c.eval(x)).collect();
            let gv: Vec<Rational> = gc.iter().map(|c| c.eval(x)).collect();
            sylvester_det(&fv, &gv)
        })
        .collect();
    let res = interpolate_univariate(&xs, &ys);
    if res.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    Ok(res)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Critical,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointVerdict {
    #[serde(rename = "PD")]
    Pd,
    #[serde(rename = "PSD")]
    Psd,
    Rejected,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidatePoint {
    pub x: [f64; 2],
    pub source: Source,
    /// `p_0 … p_{m−1}` with `det(tI + F(x)) = t^m + Σ p_k t^k`.
    pub cert: Vec<f64>,
    pub min_eig: f64,
    pub verdict: Option<PointVerdict>,
}

impl CandidatePoint {
    fn new(x: [f64; 2], source: Source) -> Self {
        CandidatePoint { x, source, cert: Vec::new(), min_eig: f64::NAN, verdict: None }
    }
}

fn eval_grad(p: &BivarPoly, x: &[f64; 2]) -> [f64; 2] {
    [p.derivative(0).eval_f64(x), p.derivative(1).eval_f64(x)]
}

/// Residual bound for a point of `{f = 0}`.
fn residual_ok(f: &BivarPoly, x: &[f64; 2], tol: f64) -> bool {
    let r = x[0].abs().max(x[1].abs()).max(1.0);
    f.eval_f64(x).abs() <= tol * (1.0 + f.l1_norm() * r.powi(f.degree().max(0)))
}

/// Newton steps on `f = g = 0`, kept only if they reduce the residual.
fn refine(f: &BivarPoly, g: &BivarPoly, mut x: [f64; 2]) -> [f64; 2] {
    let (fx, fy, gx, gy) = (f.derivative(0), f.derivative(1), g.derivative(0), g.derivative(1));
    let norm = |x: &[f64; 2]| f.eval_f64(x).hypot(g.eval_f64(x));
    let mut best = norm(&x);
    for _ in 0..6 {
        let (a, b, c, d) = (fx.eval_f64(&x), fy.eval_f64(&x), gx.eval_f64(&x), gy.eval_f64(&x));
        let det = a * d - b * c;
        if det.abs() <= 1e-12 * (a.abs() + b.abs()) * (c.abs() + d.abs()) || det == 0.0 {
            break;
        }
        let (fv, gv) = (f.eval_f64(&x), g.eval_f64(&x));
        let next = [x[0] - (d * fv - b * gv) / det, x[1] - (a * gv - c * fv) / det];
        let r = norm(&next);
        if r.is_nan() || r >= best {
            break;
        }
        x = next;
        best = r;
    }
    x
}

/// Real roots in `x1` of `f(·, x2)` after clustering nearby complex roots.
fn x1_roots(f: &BivarPoly, x2: f64) -> Vec<f64> {
    let c = f.coeffs_in_x1_at(x2);
    let scale = c.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut c = c;
    while c.len() > 1 && c.last().is_some_and(|v| v.abs() <= 1e-12 * scale) {
        c.pop();
    }
    let mut roots = poly_roots(&c);
    roots.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut clusters: Vec<(num_complex::Complex64, usize)> = Vec::new();
    for z in roots {
        match clusters.iter_mut().find(|(w, n)| (z - *w / *n as f64).norm() <= 1e-4 * z.norm().max(1.0)) {
            Some((w, n)) => {
                *w += z;
                *n += 1;
            }
            None => clusters.push((z, 1)),
        }
    }
    clusters.into_iter().map(|(w, n)| w / n as f64).filter(|z| is_real(*z, 1e-6)).map(|z| z.re).collect()
}

fn sort_dedup(points: &mut Vec<CandidatePoint>) {
    points.sort_by(|a, b| {
        a.x[1].total_cmp(&b.x[1]).then(a.x[0].total_cmp(&b.x[0])).then(a.source.cmp(&b.source))
    });
    let mut out: Vec<CandidatePoint> = Vec::new();
    for p in points.drain(..) {
        let dup = out.iter().any(|q| (q.x[0] - p.x[0]).abs().max((q.x[1] - p.x[1]).abs()) <= 1e-8);
        if !dup {
            out.push(p);
        }
    }
    *points = out;
}

/// Real solutions of `f = g = 0` passing `accept`.
pub fn solve_system(f: &BivarPoly, g: &BivarPoly, accept: impl Fn(&[f64; 2]) -> bool) -> Result<Vec<[f64; 2]>> {
    let res = resultant_elim_x1(f, g)?;
    let mut out: Vec<[f64; 2]> = Vec::new();
    for (x2, _) in real_roots_with_multiplicity(&res) {
        let mut xs = x1_roots(f, x2);
        if f.degree_in(0) <= 0 {
            xs = x1_roots(g, x2);
        }
        if xs.is_empty() && f.degree_in(0) <= 0 && g.degree_in(0) <= 0 {
            xs.push(0.0);
        }
        for x1 in xs {
            let x = refine(f, g, [x1, x2]);
            if accept(&x) && !out.iter().any(|y| (y[0] - x[0]).abs().max((y[1] - x[1]).abs()) <= 1e-8) {
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// Critical points of `p`: real solutions of `∇p = 0`.
pub fn critical_points(p: &BivarPoly) -> Result<Vec<CandidatePoint>> {
    let (g1, g2) = (p.derivative(0), p.derivative(1));
    if g1.is_zero() && g2.is_zero() {
        return Ok(vec![CandidatePoint::new([0.0, 0.0], Source::Critical)]);
    }
    if p.degree() < 2 {
        return Ok(Vec::new());
    }
    let accept = |x: &[f64; 2]| critical_residual_ok(p, x);
    let pts = if g1.is_zero() || g2.is_zero() {
        // only one equation: the critical set is a union of lines
        let g = if g1.is_zero() { &g2 } else { &g1 };
        let var = usize::from(g1.is_zero());
        univariate_lines(g, var).into_iter().filter(accept).collect()
    } else {
        solve_system(&g1, &g2, accept)?
    };
    let mut out: Vec<CandidatePoint> = pts.into_iter().map(|x| CandidatePoint::new(x, Source::Critical)).collect();
    sort_dedup(&mut out);
    Ok(out)
}

/// Points `x` with the other coordinate zero on the lines `{g = 0}` when `g`
/// depends on coordinate `var` only.
fn univariate_lines(g: &BivarPoly, var: usize) -> Vec<[f64; 2]> {
    let c: Vec<f64> = (0..=g.degree().max(0) as u32)
        .map(|k| {
            let mut e = [0, 0];
            e[var] = k;
            g.coeff(&e).to_f64()
        })
        .collect();
    poly_roots(&c)
        .into_iter()
        .filter(|z| is_real(*z, 1e-8))
        .map(|z| {
            let mut x = [0.0, 0.0];
            x[var] = z.re;
            x
        })
        .collect()
}

/// `|∇p(x)| ≤ 1e-7 (1 + ‖p‖ ‖x‖^{deg−1})`.
pub fn critical_residual_ok(p: &BivarPoly, x: &[f64; 2]) -> bool {
    let g = eval_grad(p, x);
    let r = x[0].hypot(x[1]);
    g[0].hypot(g[1]) <= 1e-7 * (1.0 + p.l1_norm() * r.powi(p.degree() - 1))
}

/// Points of `p = 0` where one partial derivative vanishes.
pub fn boundary_points(p: &BivarPoly) -> Result<Vec<CandidatePoint>> {
    let mut out = Vec::new();
    if p.degree() < 1 {
        return Ok(out);
    }
    for k in 0..2 {
        let g = p.derivative(k);
        let accept = |x: &[f64; 2]| residual_ok(p, x, 1e-7) && residual_ok(&g, x, 1e-7);
        if g.is_zero() {
            continue;
        }
        if g.degree() == 0 {
            continue;
        }
        match solve_system(p, &g, accept) {
            Ok(pts) => out.extend(pts.into_iter().map(|x| CandidatePoint::new(x, Source::Boundary))),
            Err(Error::IdenticallyZero) | Err(Error::DegreeZero) => {
                let swapped = solve_system(&p.swap_vars(), &g.swap_vars(), |x| accept(&[x[1], x[0]]));
                if let Ok(pts) = swapped {
                    out.extend(pts.into_iter().map(|x| CandidatePoint::new([x[1], x[0]], Source::Boundary)));
                }
            }
            Err(e) => return Err(e),
        }
    }
    sort_dedup(&mut out);
    Ok(out)
}

/// Coefficients `p_0 … p_{m−1}` of `det(tI + A)` by Faddeev–LeVerrier.
pub fn char_poly_plus(a: &DMatrix<f64>) -> Vec<f64> {
    let m = a.nrows();
    let neg = -a;
    let mut coeffs = vec![0.0; m + 1];
    coeffs[m] = 1.0;
    let mut mk = DMatrix::<f64>::zeros(m, m);
    for k in 1..=m {
        mk = &neg * &mk + DMatrix::identity(m, m) * coeffs[m - k + 1];
        let amk = &neg * &mk;
        coeffs[m - k] = -amk.trace() / k as f64;
    }
    coeffs.truncate(m);
    coeffs
}

/// Per-coefficient tolerance `1e-9 max(1, ‖F‖)^{m−k}` for `p_k`.
fn coeff_tol(norm: f64, m: usize, k: usize) -> f64 {
    1e-9 * norm.max(1.0).powi((m - k) as i32)
}

pub fn certify_psd_point<T: Scalar>(f: &Pencil<T>, x: [f64; 2], source: Source) -> CandidatePoint {
    let fx = f.eval(&x);
    let m = fx.nrows();
    let cert = char_poly_plus(&fx);
    let norm = fx.norm();
    let min_eig = sym_eigen(&fx).0.iter().copied().fold(f64::INFINITY, f64::min);
    let pd = cert.iter().enumerate().all(|(k, &c)| c > coeff_tol(norm, m, k));
    let psd = cert.iter().enumerate().all(|(k, &c)| c >= -coeff_tol(norm, m, k));
    let verdict = if pd {
        PointVerdict::Pd
    } else if psd {
        PointVerdict::Psd
    } else {
        PointVerdict::Rejected
    };
    CandidatePoint { x, source, cert, min_eig, verdict: Some(verdict) }
}

#[derive(Clone, Debug, Serialize)]
pub struct InteriorPoint {
    pub point: CandidatePoint,
    /// Only a semidefinite (singular) point was found.
    pub degenerate: bool,
    /// No first-order direction leaves the point inside the LMI set.
    pub single_point: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocateReport {
    pub found: Option<InteriorPoint>,
    pub candidates: Vec<CandidatePoint>,
}

/// Can `F(x* + s·d) ⪰ 0` for small `s > 0` in some direction `d`? Tested on
/// the kernel of `F(x*)` for 720 directions.
fn isolated_psd_point<T: Scalar>(f: &Pencil<T>, x: [f64; 2]) -> bool {
    let fx = f.eval(&x);
    let (vals, vecs) = sym_eigen(&fx);
    let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
    let kernel: Vec<usize> = (0..vals.len()).filter(|&i| vals[i].abs() <= 1e-7 * scale).collect();
    if kernel.is_empty() {
        return false;
    }
    let k = DMatrix::from_fn(fx.nrows(), kernel.len(), |r, c| vecs[(r, kernel[c])]);
    let (f1, f2) = (f.mat(1).to_dmatrix(), f.mat(2).to_dmatrix());
    let dir_scale = f1.norm().max(f2.norm()).max(f64::MIN_POSITIVE);
    (0..720).all(|s| {
        let phi = PI * s as f64 / 360.0;
        let fd = &f1 * phi.cos() + &f2 * phi.sin();
        let restricted = k.transpose() * fd * &k;
        let lo = sym_eigen(&restricted).0.iter().copied().fold(f64::INFINITY, f64::min);
        lo < -1e-9 * dir_scale
    })
}

pub fn find_interior_point<T: Scalar>(f: &Pencil<T>, p: &BivarPoly) -> Result<LocateReport> {
    let mut candidates: Vec<CandidatePoint> = Vec::new();
    for cp in critical_points(p)?.into_iter().chain(boundary_points(p)?) {
        let c = certify_psd_point(f, cp.x, cp.source);
        let is_pd = c.verdict == Some(PointVerdict::Pd);
        candidates.push(c);
        if is_pd {
            let point = candidates.last().cloned().expect("just pushed");
            return Ok(LocateReport {
                found: Some(InteriorPoint { point, degenerate: false, single_point: false }),
                candidates,
            });
        }
    }
    let best = candidates
        .iter()
        .filter(|c| c.verdict == Some(PointVerdict::Psd))
        .max_by(|a, b| a.min_eig.total_cmp(&b.min_eig))
        .cloned();
    let found = best.map(|point| {
        let single_point = isolated_psd_point(f, point.x);
        InteriorPoint { point, degenerate: true, single_point }
    });
    Ok(LocateReport { found, candidates })
}
