//! Affine symmetric pencils `F(x) = F0 + x1 F1 + … + xn Fn`.

use nalgebra::DMatrix;
use serde_json::{json, Map, Value};

use super::interp::interpolate_total_degree;
use super::matrix::{det_laplace, Mat};
use super::mpoly::MPoly;
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational, Scalar};

/// Sizes up to this use the symbolic cofactor determinant; larger pencils are
/// interpolated.
pub const SYMBOLIC_DET_MAX: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct Pencil<T> {
    mats: Vec<Mat<T>>,
    /// `c` with `det F = c·p`, once known.
    pub scale: Option<T>,
}

impl<T: Scalar> Pencil<T> {
    /// `mats[0]` is the constant term, `mats[k]` multiplies `x_k`.
    pub fn new(mats: Vec<Mat<T>>) -> Result<Self> {
        let m = mats.first().map(Mat::rows).ok_or_else(|| Error::InvalidInput("empty pencil".into()))?;
        for f in &mats {
            if !f.is_square() || f.rows() != m {
                return Err(Error::DimensionMismatch { expected: m, found: f.rows().max(f.cols()) });
            }
            if !f.is_symmetric() {
                return Err(Error::InvalidInput("pencil matrices must be symmetric".into()));
            }
        }
        Ok(Pencil { mats, scale: None })
    }

    pub fn planar(f0: Mat<T>, f1: Mat<T>, f2: Mat<T>) -> Result<Self> {
        Self::new(vec![f0, f1, f2])
    }

    pub fn identity(m: usize) -> Self {
        Pencil { mats: vec![Mat::identity(m), Mat::zeros(m, m), Mat::zeros(m, m)], scale: None }
    }

    pub fn size(&self) -> usize {
        self.mats[0].rows()
    }

    pub fn num_vars(&self) -> usize {
        self.mats.len() - 1
    }

    pub fn mats(&self) -> &[Mat<T>] {
        &self.mats
    }

    pub fn mat(&self, k: usize) -> &Mat<T> {
        &self.mats[k]
    }

    pub fn eval(&self, x: &[f64]) -> DMatrix<f64> {
        let mut out = self.mats[0].to_dmatrix();
        for (f, &xk) in self.mats[1..].iter().zip(x) {
            out += f.to_dmatrix() * xk;
        }
        out
    }

    pub fn eval_exact(&self, x: &[T]) -> Mat<T> {
        self.mats[1..].iter().zip(x).fold(self.mats[0].clone(), |acc, (f, xk)| acc.add(&f.scale(xk)))
    }

    /// Multiplies every matrix by `s`.
    pub fn scaled(&self, s: &T) -> Self {
        Pencil { mats: self.mats.iter().map(|f| f.scale(s)).collect(), scale: None }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> Pencil<U> {
        Pencil { mats: self.mats.iter().map(|a| a.map(f)).collect(), scale: self.scale.as_ref().map(f) }
    }

    pub fn to_f64(&self) -> Pencil<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn to_rational(&self) -> Pencil<Rational> {
        self.map(Scalar::to_rational)
    }

    /// Entry `(i, j)` as an affine polynomial in `N` variables.
    fn entry_poly<const N: usize>(&self, i: usize, j: usize) -> MPoly<N> {
        let mut p = MPoly::constant(self.mats[0][(i, j)].to_rational());
        for (k, f) in self.mats[1..].iter().enumerate().take(N) {
            let mut e = [0; N];
            e[k] = 1;
            p.add_term(e, f[(i, j)].to_rational());
        }
        p
    }

    fn check_vars<const N: usize>(&self) -> Result<()> {
        if self.num_vars() != N {
            return Err(Error::DimensionMismatch { expected: N, found: self.num_vars() });
        }
        Ok(())
    }

    /// `det F(x)` by symbolic cofactor expansion over the exact rational
    /// images of the entries.
    pub fn det_symbolic<const N: usize>(&self) -> Result<MPoly<N>> {
        self.check_vars::<N>()?;
        let m = self.size();
        let rows: Vec<Vec<MPoly<N>>> =
            (0..m).map(|i| (0..m).map(|j| self.entry_poly::<N>(i, j)).collect()).collect();
        Ok(det_laplace(&rows))
    }

    /// `det F(x)` by exact interpolation on a principal lattice.
    pub fn det_interpolated<const N: usize>(&self) -> Result<MPoly<N>> {
        self.check_vars::<N>()?;
        let exact = self.to_rational();
        interpolate_total_degree::<N>(self.size() as u32, |x| exact.eval_exact(x).det())
    }

    pub fn det_poly<const N: usize>(&self) -> Result<MPoly<N>> {
        if self.size() <= SYMBOLIC_DET_MAX {
            self.det_symbolic::<N>()
        } else {
            self.det_interpolated::<N>()
        }
    }

    /// Schema: `{"m", "c", "F0", "F1", …}` with entries as exact strings.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("m".into(), json!(self.size()));
        obj.insert(
            "c".into(),
            match &self.scale {
                Some(c) => json!(c.to_f64()),
                None => Value::Null,
            },
        );
        for (k, f) in self.mats.iter().enumerate() {
            let rows: Vec<Vec<String>> = f.to_rows().iter().map(|r| r.iter().map(Scalar::to_text).collect()).collect();
            obj.insert(format!("F{k}"), json!(rows));
        }
        Value::Object(obj)
    }
}

impl Pencil<Rational> {
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidInput(format!("pencil JSON: {msg}"));
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        let mut mats = Vec::new();
        for k in 0..=3 {
            let Some(rows) = obj.get(&format!("F{k}")) else { break };
            mats.push(parse_matrix(rows)?);
        }
        if mats.len() < 2 {
            return Err(bad("at least F0 and F1 are required"));
        }
        let mut pencil = Pencil::new(mats)?;
        if let Some(m) = obj.get("m") {
            let m = m.as_u64().ok_or_else(|| bad("`m` must be a non-negative integer"))? as usize;
            if m != pencil.size() {
                return Err(Error::DimensionMismatch { expected: m, found: pencil.size() });
            }
        }
        pencil.scale = match obj.get("c") {
            None | Some(Value::Null) => None,
            Some(c) => Some(parse_entry(c)?),
        };
        Ok(pencil)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("pencil JSON: {e}")))?;
        Self::from_json(&v)
    }
}

/// Number or numeric string, read exactly.
pub fn parse_entry(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => Err(Error::InvalidInput(format!("expected a number, found {v}"))),
    }
}

pub fn parse_matrix(v: &Value) -> Result<Mat<Rational>> {
    let rows = v.as_array().ok_or_else(|| Error::InvalidInput("matrix must be an array of rows".into()))?;
    let parsed: Result<Vec<Vec<Rational>>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::InvalidInput("matrix row must be an array".into()))?
                .iter()
                .map(parse_entry)
                .collect()
        })
        .collect();
    let mat = Mat::from_rows(parsed?)?;
    if !mat.is_square() {
        return Err(Error::DimensionMismatch { expected: mat.rows(), found: mat.cols() });
    }
    Ok(mat)
}

/// Homogeneous pencil `G0 x0 + G1 x1 + G2 x2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil3<T> {
    pub g: [Mat<T>; 3],
}

impl<T: Scalar> Pencil3<T> {
    pub fn eval(&self, x: &[f64; 3]) -> DMatrix<f64> {
        self.g.iter().zip(x).fold(DMatrix::zeros(self.g[0].rows(), self.g[0].rows()), |acc, (g, &xk)| {
            acc + g.to_dmatrix() * xk
        })
    }

    /// Affine pencil obtained at `x0 = 1`.
    pub fn dehomogenize(&self) -> Pencil<T> {
        Pencil { mats: self.g.to_vec(), scale: None }
    }

    pub fn is_zero(&self) -> bool {
        self.g.iter().all(Mat::is_zero)
    }
}

impl<T: Scalar> serde::Serialize for Pencil<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse::{parse_poly, parse_poly3};
    use crate::scalar::rat;

    fn cubic_pencil() -> Pencil<Rational> {
        Pencil::planar(
            Mat::from_i64_rows(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 1]]),
            Mat::from_i64_rows(&[&[0, 0, 1], &[0, -1, 0], &[1, 0, 0]]),
            Mat::from_i64_rows(&[&[0, -1, 0], &[-1, 0, 0], &[0, 0, 0]]),
        )
        .unwrap()
    }

    #[test]
    fn symbolic_and_interpolated_agree() {
        let f = cubic_pencil();
        let p = parse_poly("x1^3 - x2^2 - x1").unwrap();
        assert_eq!(f.det_symbolic::<2>().unwrap(), p);
        assert_eq!(f.det_interpolated::<2>().unwrap(), p);
    }

    #[test]
    fn cayley_trivariate() {
        let e = |i: usize, j: usize| {
            let mut m = Mat::<Rational>::zeros(3, 3);
            m[(i, j)] = rat(1);
            m[(j, i)] = rat(1);
            m
        };
        let f = Pencil::new(vec![Mat::identity(3), e(0, 1), e(0, 2), e(1, 2)]).unwrap();
        let expect = parse_poly3("1 - x1^2 - x2^2 - x3^2 + 2*x1*x2*x3").unwrap();
        assert_eq!(f.det_symbolic::<3>().unwrap(), expect);
        assert_eq!(f.det_interpolated::<3>().unwrap(), expect);
        assert!(f.det_symbolic::<2>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut f = cubic_pencil().scaled(&Rational::new(1.into(), 3.into()));
        f.scale = Some(rat(2));
        let back = Pencil::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn json_rejects_bad_shapes() {
        let bad = r#"{"m": 2, "F0": [["1","0"],["0","1"]], "F1": [["1"]]}"#;
        assert!(matches!(Pencil::from_json_str(bad), Err(Error::DimensionMismatch { .. })));
        let asym = r#"{"F0": [[1,2],[0,1]], "F1": [[0,0],[0,0]]}"#;
        assert!(Pencil::from_json_str(asym).is_err());
        let wrong_m = r#"{"m": 3, "F0": [[1]], "F1": [[0]]}"#;
        assert!(matches!(Pencil::from_json_str(wrong_m), Err(Error::DimensionMismatch { .. })));
    }
}
