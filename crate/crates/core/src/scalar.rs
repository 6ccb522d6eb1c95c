//! Scalar kinds used by every formula in the crate.
//!
//! All linear algebra is generic over [`Scalar`] (a commutative ring) or
//! [`Field`]. Three kinds are provided: exact [`Rational`] (the default),
//! binary `f64`, and multivariate polynomials ([`crate::poly::Poly`]).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Arbitrary precision rational number.
pub type Rational = BigRational;

/// Commutative ring element.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn from_i64(v: i64) -> Self;
}

/// Scalars with exact (or floating) division.
pub trait Field: Scalar + Div<Output = Self> + for<'a> Div<&'a Self, Output = Self> {
    /// Preference of this value as an elimination pivot. Zero means unusable.
    fn pivot_weight(&self) -> f64;

    fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self)
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }
}

/// Ordered fields: rationals and floats.
pub trait Real: Field + PartialOrd {
    fn abs_value(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn to_f64(&self) -> f64;

    /// Equality up to `tol` for floats; exact for rationals.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
}

impl Scalar for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
}

impl Field for Rational {
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            // smaller bit sizes keep intermediate growth down
            1.0 / (1.0 + (self.numer().bits() + self.denom().bits()) as f64)
        }
    }

    fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Ratio::recip(self))
        }
    }
}

impl Real for Rational {
    fn abs_value(&self) -> Self {
        self.abs()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Field for f64 {
    fn pivot_weight(&self) -> f64 {
        self.abs()
    }
}

impl Real for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.abs().max(other.abs()).max(1.0);
        (self - other).abs() <= tol * scale
    }
}

/// Shorthand for `num/den` as a rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, an integer, or a finite decimal literal (`"0.125"`,
/// `"-1.5e-3"`) into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

/// `p/q` (or `p` when integral).
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering with 12 significant digits.
pub fn format_decimal(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-5..12).contains(&magnitude) {
        let decimals = (11 - magnitude).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

/// Conversion between scalars and the JSON representation used by graph
/// spec files.
pub trait JsonScalar: Field {
    fn from_json(v: &Value) -> Result<Self>;
    fn to_json(&self) -> Value;
    /// Human-readable rendering for reports.
    fn render(&self) -> String;
}

impl JsonScalar for Rational {
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => parse_rational(&n.to_string()),
            other => Err(Error::Parse(format!("expected a scalar, found {other}"))),
        }
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn render(&self) -> String {
        if self.is_integer() {
            format_rational(self)
        } else {
            format!(
                "{} ≈ {}",
                format_rational(self),
                format_decimal(Real::to_f64(self))
            )
        }
    }
}

impl JsonScalar for f64 {
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("not a finite number: {n}"))),
            Value::String(s) => match s.parse::<f64>() {
                Ok(x) => Ok(x),
                Err(_) => parse_rational(s).map(|r| Real::to_f64(&r)),
            },
            other => Err(Error::Parse(format!("expected a scalar, found {other}"))),
        }
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

/// Converts an exact rational into any real field.
pub trait FromRational: Sized {
    fn from_rational(r: &Rational) -> Self;
}

impl FromRational for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl FromRational for f64 {
    fn from_rational(r: &Rational) -> Self {
        Real::to_f64(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("-1.5e-3").unwrap(), rat(-3, 2000));
        assert_eq!(parse_rational("2E2").unwrap(), rat(200, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn formats() {
        assert_eq!(format_rational(&rat(337, 625)), "337/625");
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(format_decimal(337.0 / 625.0), "0.5392");
        assert_eq!(format_decimal(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_decimal(-2.0), "-2");
    }

    #[test]
    fn json_round_trip() {
        let r = rat(-5, 7);
        assert_eq!(Rational::from_json(&r.to_json()).unwrap(), r);
        let x = 0.25f64;
        assert_eq!(f64::from_json(&x.to_json()).unwrap(), x);
        assert_eq!(f64::from_json(&Value::String("1/4".into())).unwrap(), 0.25);
    }
}
