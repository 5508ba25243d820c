//! Bézoutians, symmetric pencils from rational parametrizations, and the
//! determinant and origin checks on those pencils.

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{is_real, poly_roots, sym_eigenvalues, REAL_ROOT_TOL};
use crate::polycore::{BivarPoly, Mat, Pencil, UniPoly};
use crate::scalar::{rat, Rational, Scalar};

/// Bézoutian of `g, h` padded to size `m`:
/// `Σ b_kl u^k v^l = (g(u)h(v) − g(v)h(u)) / (u − v)`.
pub fn bezout_matrix_sized(g: &UniPoly, h: &UniPoly, m: usize) -> Mat<Rational> {
    let mut b = Mat::zeros(m, m);
    for (i, gi) in g.coeffs().iter().enumerate() {
        if gi.is_zero() {
            continue;
        }
        for (j, hj) in h.coeffs().iter().enumerate() {
            if i == j || hj.is_zero() {
                continue;
            }
            let (a, lo) = (i.max(j), i.min(j));
            let v = if i > j { gi * hj } else { -(gi * hj) };
            for s in 0..(a - lo) {
                let (r, c) = (lo + s, a - 1 - s);
                b[(r, c)] = &b[(r, c)] + &v;
            }
        }
    }
    b
}

pub fn bezout_matrix(g: &UniPoly, h: &UniPoly) -> Result<Mat<Rational>> {
    let m = g.degree().max(h.degree());
    if m < 1 {
        return Err(Error::DegreeZero);
    }
    Ok(bezout_matrix_sized(g, h, m as usize))
}

/// `x1 = q1(u)/q0(u)`, `x2 = q2(u)/q0(u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Parametrization {
    pub q0: UniPoly,
    pub q1: UniPoly,
    pub q2: UniPoly,
}

impl Parametrization {
    pub fn new(q0: UniPoly, q1: UniPoly, q2: UniPoly) -> Result<Self> {
        let par = Parametrization { q0, q1, q2 };
        if par.degree() < 1 {
            return Err(Error::DegreeZero);
        }
        Ok(par)
    }

    pub fn from_ints(q0: &[i64], q1: &[i64], q2: &[i64]) -> Result<Self> {
        Self::new(UniPoly::from_ints(q0), UniPoly::from_ints(q1), UniPoly::from_ints(q2))
    }

    pub fn degree(&self) -> usize {
        self.q0.degree().max(self.q1.degree()).max(self.q2.degree()).max(0) as usize
    }

    /// Curve point at parameter `u`, `None` at a pole.
    pub fn point(&self, u: f64) -> Option<[f64; 2]> {
        let d = self.q0.eval_f64(u);
        (d != 0.0).then(|| [self.q1.eval_f64(u) / d, self.q2.eval_f64(u) / d])
    }

    /// `p(q1/q0, q2/q0) · q0^deg p`, which vanishes iff the parametrization
    /// lies on `p = 0`.
    pub fn substitute(&self, p: &BivarPoly) -> UniPoly {
        let d = p.degree().max(0) as u32;
        let pow = |q: &UniPoly, k: u32| (0..k).fold(UniPoly::constant(rat(1)), |acc, _| &acc * q);
        let mut out = UniPoly::zero();
        for (&[a, b], c) in p.terms() {
            let term = &(&pow(&self.q1, a) * &pow(&self.q2, b)) * &pow(&self.q0, d - a - b);
            out = &out + &term.scale(c);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct ParamPencil {
    pub pencil: Pencil<Rational>,
    /// Global sign applied to `B(q1 − x1 q0, q2 − x2 q0)`.
    pub sign: i32,
}

/// `s · B(q1 − x1 q0, q2 − x2 q0) = s (B(q1,q2) + x1 B(q2,q0) + x2 B(q0,q1))`
/// with `s = ±1` maximizing the smallest eigenvalue of the constant term.
pub fn pencil_from_param(par: &Parametrization) -> Result<ParamPencil> {
    let m = par.degree();
    if m < 1 {
        return Err(Error::DegreeZero);
    }
    let f0 = bezout_matrix_sized(&par.q1, &par.q2, m);
    let f1 = bezout_matrix_sized(&par.q2, &par.q0, m);
    let f2 = bezout_matrix_sized(&par.q0, &par.q1, m);
    let eig = sym_eigenvalues(&f0.to_dmatrix());
    let lo = eig.first().copied().unwrap_or(0.0);
    let hi = eig.last().copied().unwrap_or(0.0);
    let tie = 1e-12 * hi.abs().max(lo.abs());
    let sign = if -hi > lo + tie { -1 } else { 1 };
    let s = rat(sign as i64);
    let pencil = Pencil::planar(f0.scale(&s), f1.scale(&s), f2.scale(&s))?;
    Ok(ParamPencil { pencil, sign })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Interlacing {
    Definite,
    Semidefinite,
    Indefinite,
}

#[derive(Clone, Debug, Serialize)]
pub struct InterlaceReport {
    pub verdict: Interlacing,
    pub roots_q1: Vec<[f64; 2]>,
    pub roots_q2: Vec<[f64; 2]>,
    /// `(positive, negative, zero)` eigenvalue counts of `B(q1, q2)`.
    pub signature: (usize, usize, usize),
    /// The root pattern and the Bézoutian signature tell the same story.
    pub consistent: bool,
}

pub fn signature(b: &Mat<Rational>) -> (usize, usize, usize) {
    let eig = sym_eigenvalues(&b.to_dmatrix());
    let tol = 1e-9 * eig.iter().map(|v| v.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let pos = eig.iter().filter(|&&v| v > tol).count();
    let neg = eig.iter().filter(|&&v| v < -tol).count();
    (pos, neg, eig.len() - pos - neg)
}

fn to_pairs(z: &[Complex64]) -> Vec<[f64; 2]> {
    z.iter().map(|z| [z.re, z.im]).collect()
}

pub fn interlace_check(q1: &UniPoly, q2: &UniPoly) -> Result<InterlaceReport> {
    if q1.is_zero() || q2.is_zero() {
        return Err(Error::InvalidInput("interlacing needs two nonzero polynomials".into()));
    }
    let r1 = poly_roots(&q1.to_f64());
    let r2 = poly_roots(&q2.to_f64());
    let all_real = r1.iter().chain(&r2).all(|&z| is_real(z, REAL_ROOT_TOL));
    let m = q1.degree().max(q2.degree()).max(1) as usize;
    let sig = signature(&bezout_matrix_sized(q1, q2, m));

    let mut verdict = Interlacing::Indefinite;
    if all_real {
        let mut merged: Vec<(f64, u8)> =
            r1.iter().map(|z| (z.re, 1)).chain(r2.iter().map(|z| (z.re, 2))).collect();
        merged.sort_by(|a, b| a.0.total_cmp(&b.0));
        let close = |a: f64, b: f64| (a - b).abs() <= REAL_ROOT_TOL * a.abs().max(b.abs()).max(1.0);
        let mut touching = false;
        let mut kept: Vec<(f64, u8)> = Vec::new();
        for r in merged {
            match kept.last() {
                Some(&(x, label)) if label != r.1 && close(x, r.0) => {
                    kept.pop();
                    touching = true;
                }
                _ => kept.push(r),
            }
        }
        let alternating = kept.windows(2).all(|w| w[0].1 != w[1].1 && !close(w[0].0, w[1].0));
        if alternating {
            verdict = if touching { Interlacing::Semidefinite } else { Interlacing::Definite };
        }
    }
    let definite_sig = sig.2 == 0 && (sig.0 == 0 || sig.1 == 0);
    let consistent = match verdict {
        Interlacing::Definite => definite_sig,
        Interlacing::Semidefinite => (sig.0 == 0 || sig.1 == 0) && sig.2 > 0,
        Interlacing::Indefinite => !definite_sig,
    };
    Ok(InterlaceReport { verdict, roots_q1: to_pairs(&r1), roots_q2: to_pairs(&r2), signature: sig, consistent })
}

/// Cauchy index of `num/den` over the projective real line: `+1` for each
/// jump from `−∞` to `+∞` as `u` increases, `−1` for the reverse.
pub fn cauchy_index(num: &UniPoly, den: &UniPoly) -> i64 {
    let g = num.gcd(den);
    let (num, den) = if g.degree() > 0 { (num.div_rem(&g).0, den.div_rem(&g).0) } else { (num.clone(), den.clone()) };
    let f = |u: f64| num.eval_f64(u) / den.eval_f64(u);
    let mut poles: Vec<f64> =
        poly_roots(&den.to_f64()).into_iter().filter(|z| is_real(*z, REAL_ROOT_TOL)).map(|z| z.re).collect();
    poles.sort_by(f64::total_cmp);
    poles.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let mut spread = poles.windows(2).map(|w| w[1] - w[0]).fold(1.0, f64::min);
    spread = (spread * 1e-4).max(1e-9);
    let mut index = 0;
    for &r in &poles {
        let (l, rr) = (f(r - spread), f(r + spread));
        if l < 0.0 && rr > 0.0 {
            index += 1;
        } else if l > 0.0 && rr < 0.0 {
            index -= 1;
        }
    }
    let k = num.degree() - den.degree();
    if k > 0 {
        let lead = (num.leading() / den.leading()).is_positive();
        let at_plus = if lead { 1.0 } else { -1.0 };
        let at_minus = if k % 2 == 0 { at_plus } else { -at_plus };
        // passing through u = ∞ goes from the +∞ end to the −∞ end
        if at_plus < 0.0 && at_minus > 0.0 {
            index += 1;
        } else if at_plus > 0.0 && at_minus < 0.0 {
            index -= 1;
        }
    }
    index
}

#[derive(Clone, Debug, Serialize)]
pub struct DetCheck {
    /// `det F = c · p`.
    pub c: f64,
    /// Largest coefficient deviation relative to the largest coefficient.
    pub max_rel_err: f64,
    #[serde(skip)]
    pub c_exact: Rational,
    #[serde(skip)]
    pub det: BivarPoly,
}

pub const DET_REL_TOL: f64 = 1e-8;

/// Tests `det F(x) = c · p(x)` coefficientwise.
pub fn verify_pencil_det<T: Scalar>(f: &Pencil<T>, p: &BivarPoly) -> Result<DetCheck> {
    let m = f.size();
    if f.num_vars() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: f.num_vars() });
    }
    if p.is_zero() || p.degree() > m as i32 {
        return Err(Error::DimensionMismatch { expected: m, found: p.degree().max(0) as usize });
    }
    let det = f.det_poly::<2>()?;
    let (lead_exp, lead) = p
        .terms()
        .max_by(|a, b| a.1.abs().cmp(&b.1.abs()))
        .map(|(e, c)| (*e, c.clone()))
        .expect("nonzero p");
    let c_exact = det.coeff(&lead_exp) / &lead;
    if c_exact.is_zero() {
        let (e, found) = det
            .terms()
            .max_by(|a, b| a.1.abs().cmp(&b.1.abs()))
            .map(|(e, c)| (*e, c.to_f64()))
            .unwrap_or((lead_exp, 0.0));
        let monomial = BivarPoly::monomial(e, rat(1)).to_string();
        return Err(Error::Mismatch { monomial, expected: 0.0, found });
    }
    let scale = det.max_abs_coeff().max(p.max_abs_coeff() * c_exact.abs().to_f64());
    let mut exps: Vec<[u32; 2]> = det.terms().map(|(e, _)| *e).chain(p.terms().map(|(e, _)| *e)).collect();
    exps.sort();
    exps.dedup();
    let mut max_rel_err = 0.0f64;
    for e in &exps {
        let expected = (&c_exact * &p.coeff(e)).to_f64();
        let found = det.coeff(e).to_f64();
        let err = if scale > 0.0 { (found - expected).abs() / scale } else { f64::INFINITY };
        max_rel_err = max_rel_err.max(err);
        if err.is_nan() || err > DET_REL_TOL {
            let monomial = BivarPoly::monomial(*e, rat(1)).to_string();
            return Err(Error::Mismatch { monomial, expected, found });
        }
    }
    Ok(DetCheck { c: c_exact.to_f64(), max_rel_err, c_exact, det })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OriginRigidity {
    StrictlyRigid,
    Marginal,
    No,
}

#[derive(Clone, Debug, Serialize)]
pub struct OriginReport {
    pub verdict: OriginRigidity,
    pub eigenvalues: Vec<f64>,
    pub tol: f64,
}

pub fn rigid_at_origin<T: Scalar>(f: &Pencil<T>) -> OriginReport {
    let eigenvalues = sym_eigenvalues(&f.mat(0).to_dmatrix());
    let norm = eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let tol = 1e-9 * norm.max(f64::MIN_POSITIVE);
    let lo = eigenvalues.first().copied().unwrap_or(0.0);
    let verdict = if lo > tol {
        OriginRigidity::StrictlyRigid
    } else if lo.abs() <= tol {
        OriginRigidity::Marginal
    } else {
        OriginRigidity::No
    };
    OriginReport { verdict, eigenvalues, tol }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly;

    fn u(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn small_bezoutians() {
        assert_eq!(bezout_matrix(&u(&[0, 1]), &u(&[1])).unwrap(), Mat::from_i64_rows(&[&[1]]));
        assert_eq!(
            bezout_matrix(&u(&[1, 0, -1]), &u(&[0, 2])).unwrap(),
            Mat::from_i64_rows(&[&[-2, 0], &[0, -2]])
        );
        assert_eq!(bezout_matrix(&u(&[3]), &u(&[1])), Err(Error::DegreeZero));
    }

    #[test]
    fn unit_circle_pencil() {
        let par = Parametrization::from_ints(&[1, 0, 1], &[1, 0, -1], &[0, 2]).unwrap();
        let pp = pencil_from_param(&par).unwrap();
        assert_eq!(pp.sign, -1);
        assert_eq!(pp.pencil.mat(0), &Mat::from_i64_rows(&[&[2, 0], &[0, 2]]));
        let check = verify_pencil_det(&pp.pencil, &parse_poly("1-x1^2-x2^2").unwrap()).unwrap();
        assert_eq!(check.c_exact, rat(4));
        assert_eq!(rigid_at_origin(&pp.pencil).verdict, OriginRigidity::StrictlyRigid);
    }

    #[test]
    fn interlacing_examples() {
        let r = interlace_check(&u(&[1, 0, -1]), &u(&[0, 2])).unwrap();
        assert_eq!(r.verdict, Interlacing::Definite);
        assert!(r.consistent);
        let r = interlace_check(&u(&[1, 0, 1]), &u(&[0, 1])).unwrap();
        assert_eq!(r.verdict, Interlacing::Indefinite);
        let r = interlace_check(&u(&[-1, 0, 1]), &u(&[-4, 0, 1])).unwrap();
        assert_eq!(r.verdict, Interlacing::Indefinite);
        assert!(r.consistent);
        let r = interlace_check(&u(&[0, -1, 1]), &u(&[0, 1])).unwrap();
        assert_eq!(r.verdict, Interlacing::Semidefinite);
    }

    #[test]
    fn cauchy_index_matches_signature() {
        let (q1, q2) = (u(&[1, 0, -1]), u(&[0, 2]));
        let (pos, neg, _) = signature(&bezout_matrix(&q1, &q2).unwrap());
        assert_eq!(pos as i64 - neg as i64, cauchy_index(&q2, &q1));
        assert_eq!(cauchy_index(&q2, &q1), -2);
        assert_eq!(cauchy_index(&q1, &q2), 2);
    }

    #[test]
    fn mismatch_is_reported() {
        let f = Pencil::<Rational>::identity(2);
        assert!(matches!(
            verify_pencil_det(&f, &parse_poly("1-x1").unwrap()),
            Err(Error::Mismatch { .. })
        ));
        assert!(matches!(
            verify_pencil_det(&f, &parse_poly("1-x1^3").unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn substitution_vanishes_on_curve() {
        let par = Parametrization::from_ints(&[1, 0, 1], &[1, 0, -1], &[0, 2]).unwrap();
        assert!(par.substitute(&parse_poly("1-x1^2-x2^2").unwrap()).is_zero());
        assert!(!par.substitute(&parse_poly("1-x1^2").unwrap()).is_zero());
    }
}
