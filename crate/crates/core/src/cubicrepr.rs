//! Determinantal representations of smooth plane cubics from the Hessian
//! family `det H(h + t·p)`, where `h = det H(p)`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::bezout::{verify_pencil_det, DetCheck};
use crate::error::{Error, Result};
use crate::locate::critical_points;
use crate::numeric::real_roots_with_multiplicity;
use crate::polycore::matrix::det_laplace;
use crate::polycore::{BivarPoly, MPoly, Mat, Pencil, Pencil3, TriPoly, UniPoly};
use crate::scalar::{rat, rational_approx, rational_to_f64, real_cbrt, Rational};

/// Homogeneous cubic in `x0, x1, x2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomoCubic(TriPoly);

impl HomoCubic {
    pub fn new(f: TriPoly) -> Result<Self> {
        if f.is_zero() || f.is_homogeneous(3) {
            Ok(HomoCubic(f))
        } else {
            Err(Error::InvalidInput("not a homogeneous cubic".into()))
        }
    }

    /// `x0^3 p(x1/x0, x2/x0)`.
    pub fn homogenize(p: &BivarPoly) -> Result<Self> {
        if p.degree() > 3 {
            return Err(Error::InvalidInput(format!("degree {} is not 3", p.degree())));
        }
        Ok(HomoCubic(TriPoly::from_terms(p.terms().map(|(&[a, b], c)| ([3 - a - b, a, b], c.clone())))))
    }

    pub fn poly(&self) -> &TriPoly {
        &self.0
    }

    pub fn dehomogenize(&self) -> BivarPoly {
        BivarPoly::from_terms(self.0.terms().map(|(&[_, a, b], c)| ([a, b], c.clone())))
    }

    /// Restriction to the chart `x_k = 1`, in the two remaining variables
    /// kept in order.
    pub fn chart(&self, k: usize) -> BivarPoly {
        BivarPoly::from_terms(self.0.terms().map(|(e, c)| {
            let rest: Vec<u32> = (0..3).filter(|&i| i != k).map(|i| e[i]).collect();
            ([rest[0], rest[1]], c.clone())
        }))
    }
}

/// Second partials of a homogeneous form of degree 3 in the first three
/// variables of `f`, as linear forms.
fn hessian_entries<const N: usize>(f: &MPoly<N>) -> Vec<Vec<MPoly<N>>> {
    (0..3).map(|i| (0..3).map(|j| f.derivative(i).derivative(j)).collect()).collect()
}

pub fn hessian(p: &HomoCubic) -> Pencil3<Rational> {
    let h = hessian_entries(p.poly());
    let g = std::array::from_fn(|k| {
        let mut e = [0u32; 3];
        e[k] = 1;
        Mat::from_fn(3, 3, |i, j| h[i][j].coeff(&e))
    });
    Pencil3 { g }
}

pub fn hessian_det(p: &HomoCubic) -> HomoCubic {
    HomoCubic(det_laplace(&hessian_entries(p.poly())))
}

/// Finite point `(x0, x1, x2)` of the cubic where all partials vanish.
fn singular_point(f: &HomoCubic) -> Result<Option<[f64; 3]>> {
    for k in 0..3 {
        let chart = f.chart(k);
        if chart.is_zero() {
            return Ok(Some([1.0, 0.0, 0.0]));
        }
        let pts = match critical_points(&chart) {
            Ok(pts) => pts,
            // the two partials share a factor: a multiple component
            Err(Error::IdenticallyZero) => return Ok(Some(lift(k, [0.0, 0.0]))),
            Err(e) => return Err(e),
        };
        for c in pts {
            let r = c.x[0].abs().max(c.x[1].abs()).max(1.0);
            if chart.eval_f64(&c.x).abs() <= 1e-8 * (1.0 + chart.l1_norm() * r.powi(3)) {
                return Ok(Some(lift(k, c.x)));
            }
        }
    }
    Ok(None)
}

fn lift(k: usize, x: [f64; 2]) -> [f64; 3] {
    let mut out = [0.0; 3];
    let mut it = x.into_iter();
    for (i, v) in out.iter_mut().enumerate() {
        *v = if i == k { 1.0 } else { it.next().unwrap_or(0.0) };
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CubicRep {
    /// Parameter of the Hessian family.
    pub t: f64,
    /// `det H(h + t p) = c · p`.
    pub c: f64,
    /// Scale `c^{-1/3}` applied to the Hessian.
    pub mu: f64,
    pub pencil: Pencil<f64>,
    pub check: DetCheck,
}

/// Coefficient of `x^α` in `g(x, t)` as a polynomial in `t`.
fn t_coeffs(g: &MPoly<4>, alpha: [u32; 3]) -> UniPoly {
    let mut c = vec![rat(0); 4];
    for (e, v) in g.terms() {
        if [e[0], e[1], e[2]] == alpha {
            c[e[3] as usize] = v.clone();
        }
    }
    UniPoly::new(c)
}

fn cubic_monomials() -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in 0..=3u32 {
        for b in 0..=(3 - a) {
            out.push([3 - a - b, a, b]);
        }
    }
    out
}

/// Hessian pencil of `s = h + t p` at a numerical `t`, linear in `x0, x1, x2`.
fn family_hessian(s: &MPoly<4>, t: f64) -> [Mat<f64>; 3] {
    let h = hessian_entries(s);
    std::array::from_fn(|k| {
        Mat::from_fn(3, 3, |i, j| {
            h[i][j].terms().filter(|(e, _)| e[k] == 1).map(|(e, c)| rational_to_f64(c) * t.powi(e[3] as i32)).sum()
        })
    })
}

pub fn cubic_representations(p: &BivarPoly) -> Result<Vec<CubicRep>> {
    if p.degree() != 3 {
        return Err(Error::InvalidInput(format!("expected a cubic, got degree {}", p.degree())));
    }
    let f = HomoCubic::homogenize(p)?;
    if let Some([x0, x1, x2]) = singular_point(&f)? {
        return Err(Error::SingularCubic { x0, x1, x2 });
    }
    let h = hessian_det(&f);
    let lift4 = |q: &TriPoly, tpow: u32| MPoly::<4>::from_terms(q.terms().map(|(e, c)| ([e[0], e[1], e[2], tpow], c.clone())));
    let s = &lift4(h.poly(), 0) + &lift4(f.poly(), 1);
    let g = det_laplace(&hessian_entries(&s));

    let monos = cubic_monomials();
    let star = *monos
        .iter()
        .max_by(|a, b| f.poly().coeff(a).abs().cmp(&f.poly().coeff(b).abs()))
        .expect("ten monomials");
    let p_star = f.poly().coeff(&star);
    let g_star = t_coeffs(&g, star);
    let mut common = UniPoly::zero();
    for beta in &monos {
        let cross = &t_coeffs(&g, *beta).scale(&p_star) - &g_star.scale(&f.poly().coeff(beta));
        common = common.gcd(&cross);
    }
    if common.is_zero() {
        return Err(Error::Numerical("Hessian family is proportional to p for every t".into()));
    }
    assert!(common.degree() <= 3, "proportionality constraints have degree {}", common.degree());

    let mut reps = Vec::new();
    for (t_float, _) in real_roots_with_multiplicity(&common) {
        let t_rat = rational_approx(t_float, 1e-9, 1_000_000);
        let t = if common.eval(&t_rat).is_zero() { rational_to_f64(&t_rat) } else { t_float };
        let c = if common.eval(&t_rat).is_zero() {
            rational_to_f64(&(g_star.eval(&t_rat) / &p_star))
        } else {
            g_star.eval_f64(t) / rational_to_f64(&p_star)
        };
        if c == 0.0 || !c.is_finite() {
            continue;
        }
        let mu = real_cbrt(1.0 / c);
        let [g0, g1, g2] = family_hessian(&s, t);
        // `+ 0.0` turns negative zeros into zeros
        let scaled = |g: &Mat<f64>| g.map(|v| v * mu + 0.0);
        let pencil = Pencil::planar(scaled(&g0), scaled(&g1), scaled(&g2))?;
        let check = verify_pencil_det(&pencil, p)?;
        if (check.c - 1.0).abs() > 1e-6 {
            return Err(Error::Numerical(format!("representation at t = {t} has det = {} p", check.c)));
        }
        reps.push(CubicRep { t, c, mu, pencil, check });
    }
    if reps.is_empty() {
        return Err(Error::NoRealSolution);
    }
    reps.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_poly, parse_poly3};

    fn homo(s: &str) -> HomoCubic {
        HomoCubic::new(parse_poly3(s).unwrap()).unwrap()
    }

    #[test]
    fn hessian_of_monomial() {
        let h = hessian(&homo("x1*x2*x3"));
        assert_eq!(h.g[0], Mat::from_i64_rows(&[&[0, 0, 0], &[0, 0, 1], &[0, 1, 0]]));
        assert_eq!(h.g[2], Mat::from_i64_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]));
        assert_eq!(hessian_det(&homo("x1*x2*x3")).poly(), &parse_poly3("2*x1*x2*x3").unwrap());
        assert!(hessian_det(&homo("x1^3")).poly().is_zero());
    }

    #[test]
    fn elliptic_hessian_and_determinant() {
        let f = HomoCubic::homogenize(&parse_poly("x1^3-x2^2-x1").unwrap()).unwrap();
        let h = hessian(&f);
        assert_eq!(h.g[0], Mat::from_i64_rows(&[&[0, -2, 0], &[-2, 0, 0], &[0, 0, -2]]));
        assert_eq!(h.g[1], Mat::from_i64_rows(&[&[-2, 0, 0], &[0, 6, 0], &[0, 0, 0]]));
        assert_eq!(h.g[2], Mat::from_i64_rows(&[&[0, 0, -2], &[0, 0, 0], &[-2, 0, 0]]));
        // h = 8(x0^3 + 3 x0 x1^2 - 3 x1 x2^2), variables renamed x1, x2, x3
        assert_eq!(hessian_det(&f).poly(), &parse_poly3("8*x1^3+24*x1*x2^2-24*x2*x3^2").unwrap());
        assert_eq!(f.dehomogenize(), parse_poly("x1^3-x2^2-x1").unwrap());
    }

    #[test]
    fn nodal_cubic_is_singular() {
        let r = cubic_representations(&parse_poly("-x1^3-x1^2+x2^2").unwrap());
        match r {
            Err(Error::SingularCubic { x0, x1, x2 }) => {
                assert!((x0 - 1.0).abs() < 1e-9 && x1.abs() < 1e-6 && x2.abs() < 1e-6);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn elliptic_parameters() {
        let reps = cubic_representations(&parse_poly("x1^3-x2^2-x1").unwrap()).unwrap();
        let ts: Vec<f64> = reps.iter().map(|r| r.t).collect();
        assert_eq!(ts, vec![-24.0, 0.0, 24.0]);
        for r in &reps {
            assert!((r.check.c - 1.0).abs() < 1e-8);
        }
    }
}
