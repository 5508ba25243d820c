//! Coefficient types.
//!
//! Polynomial data is exact ([`Rational`]); floating point enters only where
//! eigenvalues or roots are taken. Containers that must hold either kind of
//! entry (trigonometric matrices after scaling, pencils with irrational
//! normalization) are generic over [`Scalar`].

use std::fmt::{Debug, Display};
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A field element usable as a matrix or polynomial coefficient.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn to_f64(&self) -> f64;
    fn from_i64(v: i64) -> Self;
    /// Exact rational image (non-finite doubles map to zero).
    fn to_rational(&self) -> Rational;
    /// Text form accepted back by [`parse_rational`].
    fn to_text(&self) -> String;
    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Scalar for Rational {
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn to_text(&self) -> String {
        rational_to_string(self)
    }
}

impl Scalar for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).unwrap_or_else(Rational::zero)
    }
    fn to_text(&self) -> String {
        format_g17(*self)
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest double; falls back to a scaled division when numerator or
/// denominator overflow `f64` on their own.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(1000) as usize;
    let ns = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let ds = (d >> shift).to_f64().unwrap_or(f64::NAN);
    ns / ds
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::InvalidInput(format!("non-finite number {v}")))
}

/// Parses `"3"`, `"-1/2"`, `"0.125"`, `"1.5e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str_radix(if all.is_empty() { "0" } else { &all }, 10).map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(numer);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// Exact text form: integers as `"7"`, terminating fractions as decimals,
/// everything else as `"p/q"`. Always accepted by [`parse_rational`].
pub fn rational_to_string(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut d = r.denom().clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() || twos.max(fives) > 40 {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let places = twos.max(fives);
    let scaled = r.abs() * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    let digits = scaled.to_integer().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = digits.split_at(digits.len() - places);
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{int}.{frac}")
}

/// `%.17g`-style rendering: 17 significant digits, shortest of fixed or
/// exponent notation, trailing zeros trimmed.
pub fn format_g17(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.16e}", v);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let fixed = format!("{:.*}", decimals, v);
        trim_zeros(&fixed)
    } else {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Continued-fraction approximation: the first convergent within `tol`
/// of `v` (or the exact double once denominators pass `max_den`).
pub fn rational_approx(v: f64, tol: f64, max_den: i64) -> Rational {
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut x = v;
    for _ in 0..64 {
        let a = x.floor();
        if !a.is_finite() || a.abs() > 1e15 {
            break;
        }
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let r = Rational::new(h1.clone(), k1.clone());
        if (rational_to_f64(&r) - v).abs() <= tol {
            return r;
        }
        let frac = x - a;
        if frac == 0.0 {
            return r;
        }
        x = 1.0 / frac;
    }
    Rational::from_float(v).unwrap_or_else(Rational::zero)
}

/// Real cube root keeping the sign.
pub fn real_cbrt(v: f64) -> f64 {
    v.signum() * v.abs().cbrt()
}
