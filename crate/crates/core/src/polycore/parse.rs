//! Polynomial expression parser.
//!
//! ```text
//! expr   := term (("+" | "-") term)*        leading "-" allowed
//! term   := factor ("*" factor)*
//! factor := base ("^" uint)?
//! base   := number | variable | "(" expr ")"
//! number := digits ("." digits)? ("/" digits)?
//! ```
//!
//! Variables are `x1, x2, x3` for plane and space polynomials and `t` or
//! `u` for parameter polynomials. Whitespace is insignificant. Decimal literals are read exactly
//! (`0.5` is `1/2`), and `p/q` is a single rational literal.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::mpoly::{BivarPoly, TriPoly};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Parses a polynomial in `x1, x2`.
pub fn parse_poly(expr: &str) -> Result<BivarPoly> {
    let tri = parse_poly3(expr)?;
    tri.to_bivariate().ok_or_else(|| Error::UnknownVariable {
        name: "x3".into(),
        offset: expr.find("x3").unwrap_or(0),
    })
}

/// Parses a polynomial in `x1, x2, x3`.
pub fn parse_poly3(expr: &str) -> Result<TriPoly> {
    parse_with(expr, &["x1", "x2", "x3"])
}

/// Parses a univariate polynomial in `t` (or `u`), or a comma-separated
/// list of ascending coefficients such as `45,-8,10,0,1`.
pub fn parse_unipoly(expr: &str) -> Result<UniPoly> {
    if expr.contains(',') {
        let coeffs: Result<Vec<Rational>> = expr.split(',').map(|c| crate::scalar::parse_rational(c.trim())).collect();
        return Ok(UniPoly::new(coeffs?));
    }
    let p = parse_with(expr, &["t", "u"])?;
    if p.degree_in(0) > 0 && p.degree_in(1) > 0 {
        return Err(Error::UnknownVariable { name: "u".into(), offset: expr.find('u').unwrap_or(0) });
    }
    let mut coeffs = Vec::new();
    for (e, c) in p.terms() {
        let k = (e[0] + e[1]) as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::zero());
        }
        coeffs[k] = c.clone();
    }
    Ok(UniPoly::new(coeffs))
}

fn parse_with(expr: &str, vars: &[&str]) -> Result<TriPoly> {
    let mut p = Parser { src: expr.as_bytes(), pos: 0, vars };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<TriPoly> {
        let negate = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<TriPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<TriPoly> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected unsigned integer exponent"));
            }
            let k: u32 = digits.parse().map_err(|_| Error::Syntax {
                offset: start,
                message: "exponent too large".into(),
            })?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<TriPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.number().map(TriPoly::constant),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(TriPoly::var(i)),
                    None => Err(Error::UnknownVariable { name, offset: start }),
                }
            }
            Some(_) => Err(self.error("expected number, variable or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Rational> {
        let int = self.digits();
        let mut value = Rational::from_integer(int.parse::<BigInt>().expect("digits"));
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let frac = self.digits();
            if frac.is_empty() {
                return Err(self.error("expected digits after `.`"));
            }
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            value += Rational::new(frac.parse::<BigInt>().expect("digits"), scale);
        }
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let den = self.digits();
            if den.is_empty() {
                return Err(self.error("expected denominator after `/`"));
            }
            let den: BigInt = den.parse().expect("digits");
            if den.is_zero() {
                return Err(self.error("zero denominator"));
            }
            value /= Rational::from_integer(den);
        }
        debug_assert!(!value.denom().is_zero() && value.denom() >= &BigInt::one());
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    #[test]
    fn cubic_curve_coefficients() {
        let p = parse_poly("1-x1-4*x1^2-x2^2+4*x1^3").unwrap();
        let expect = [([0, 0], 1), ([1, 0], -1), ([2, 0], -4), ([0, 2], -1), ([3, 0], 4)];
        assert_eq!(p.num_terms(), expect.len());
        for (e, c) in expect {
            assert_eq!(p.coeff(&e), rat(c));
        }
    }

    #[test]
    fn zero_literal() {
        let p = parse_poly("0").unwrap();
        assert!(p.is_zero());
        assert_eq!(p.degree(), -1);
    }

    #[test]
    fn decimals_and_fractions() {
        let p = parse_poly("0.5*x1 + 3/4").unwrap();
        assert_eq!(p.coeff(&[1, 0]), ratio(1, 2));
        assert_eq!(p.coeff(&[0, 0]), ratio(3, 4));
    }

    #[test]
    fn whitespace_and_parentheses() {
        let a = parse_poly(" ( x1 + x2 ) ^ 2 ").unwrap();
        let b = parse_poly("x1^2+2*x1*x2+x2^2").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_poly("-(x1-1)").unwrap(), parse_poly("1-x1").unwrap());
    }

    #[test]
    fn error_offsets() {
        match parse_poly("1 + y") {
            Err(Error::UnknownVariable { name, offset }) => {
                assert_eq!(name, "y");
                assert_eq!(offset, 4);
            }
            other => panic!("{other:?}"),
        }
        match parse_poly("x1 * -x2") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly("x1^"), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse_poly("(x1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x1 x2"), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse_poly("1/0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly(""), Err(Error::Syntax { offset: 0, .. })));
    }

    #[test]
    fn parameter_polynomials() {
        let a = parse_unipoly("45-8*t+10*t^2+t^4").unwrap();
        assert_eq!(a, UniPoly::from_ints(&[45, -8, 10, 0, 1]));
        assert_eq!(parse_unipoly("45, -8, 10, 0, 1").unwrap(), a);
        assert_eq!(parse_unipoly("u-u^3").unwrap(), UniPoly::from_ints(&[0, 1, 0, -1]));
        assert!(parse_unipoly("t+u").is_err());
        assert!(parse_unipoly("x1").is_err());
        assert!(parse_unipoly("1,a").is_err());
    }

    #[test]
    fn x3_is_rejected_in_bivariate_context() {
        assert!(matches!(parse_poly("x1+x3"), Err(Error::UnknownVariable { offset: 3, .. })));
        let t = parse_poly3("x1*x2*x3").unwrap();
        assert_eq!(t.degree(), 3);
    }
}
