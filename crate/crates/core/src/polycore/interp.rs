//! Exact polynomial interpolation on unisolvent node sets.

use super::matrix::Mat;
use super::mpoly::MPoly;
use super::unipoly::UniPoly;
use crate::error::Result;
use crate::scalar::{rat, Rational};

/// Exponents of all monomials in `N` variables of total degree `≤ deg`,
/// in graded order.
pub fn monomials<const N: usize>(deg: u32) -> Vec<[u32; N]> {
    fn rec<const N: usize>(k: usize, left: u32, cur: &mut [u32; N], out: &mut Vec<[u32; N]>) {
        if k == N {
            out.push(*cur);
            return;
        }
        for e in 0..=left {
            cur[k] = e;
            rec(k + 1, left - e, cur, out);
        }
        cur[k] = 0;
    }
    let mut out = Vec::new();
    rec::<N>(0, deg, &mut [0; N], &mut out);
    out.sort_by_key(|e| (e.iter().sum::<u32>(), std::cmp::Reverse(*e)));
    out
}

/// Principal lattice of degree `deg` mapped into `[-1, 1]^N`; unisolvent for
/// polynomials of total degree `≤ deg`.
pub fn lattice_nodes<const N: usize>(deg: u32) -> Vec<[Rational; N]> {
    let scale = if deg == 0 { rat(1) } else { Rational::new(2.into(), deg.into()) };
    monomials::<N>(deg)
        .into_iter()
        .map(|e| std::array::from_fn(|k| rat(-1) + Rational::from_integer(e[k].into()) * &scale))
        .collect()
}

/// The unique polynomial of total degree `≤ deg` agreeing with `f` on the
/// lattice nodes.
pub fn interpolate_total_degree<const N: usize>(
    deg: u32,
    f: impl Fn(&[Rational; N]) -> Rational,
) -> Result<MPoly<N>> {
    let mons = monomials::<N>(deg);
    let nodes = lattice_nodes::<N>(deg);
    let vander = Mat::from_fn(nodes.len(), mons.len(), |r, c| {
        (0..N).fold(rat(1), |acc, k| acc * num_traits::pow(nodes[r][k].clone(), mons[c][k] as usize))
    });
    let values: Vec<Rational> = nodes.iter().map(&f).collect();
    let coeffs = vander.solve(&values)?;
    Ok(MPoly::from_terms(mons.into_iter().zip(coeffs)))
}

/// Newton divided-difference interpolation through `(x_k, y_k)` with
/// distinct nodes.
pub fn interpolate_univariate(xs: &[Rational], ys: &[Rational]) -> UniPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            dd[k] = (&dd[k] - &dd[k - 1]) / (&xs[k] - &xs[k - level]);
        }
    }
    let mut out = UniPoly::zero();
    for k in (0..n).rev() {
        let lin = UniPoly::new(vec![-xs[k].clone(), rat(1)]);
        out = &(&out * &lin) + &UniPoly::constant(dd[k].clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse::{parse_poly, parse_poly3};

    #[test]
    fn monomial_count() {
        assert_eq!(monomials::<2>(4).len(), 15);
        assert_eq!(monomials::<3>(3).len(), 20);
        assert_eq!(monomials::<2>(0), vec![[0, 0]]);
    }

    #[test]
    fn reproduces_polynomials() {
        let p = parse_poly("3 - x1*x2 + 1/2*x2^3 - x1^4").unwrap();
        let q = interpolate_total_degree::<2>(4, |x| p.eval(x)).unwrap();
        assert_eq!(p, q);
        let t = parse_poly3("1 - x1^2 - x2^2 - x3^2 + 2*x1*x2*x3").unwrap();
        assert_eq!(interpolate_total_degree::<3>(3, |x| t.eval(x)).unwrap(), t);
    }

    #[test]
    fn univariate_newton_form() {
        let p = UniPoly::from_ints(&[5, 0, -3, 1]);
        let xs: Vec<Rational> = (0..4).map(rat).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(interpolate_univariate(&xs, &ys), p);
    }
}
