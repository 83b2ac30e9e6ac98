//! Scalar types used for structure constants.
//!
//! Structure constants are kept exactly (as rationals) whenever the input
//! allows it, so identity certification can run without rounding. The
//! [`Scalar`] trait abstracts over the exact and floating-point rings the
//! sparse tensor kernels run on.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// Ring operations needed by the sparse multiplication kernels.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

/// A scalar that additionally supports exact division (used by row reduction).
pub trait FieldScalar: Scalar + std::ops::Div<Output = Self> {}
impl FieldScalar for BigRational {}

/// Correctly rounded where num-rational manages it; dividing the rounded
/// numerator and denominator would round twice.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r).filter(|v| v.is_finite()) {
        return v;
    }
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Very large numerator/denominator: scale down before dividing.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// A real number as read from input: exact when it is a finite decimal or a
/// fraction, floating point otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    Exact(BigRational),
    Float(f64),
}

impl Number {
    pub fn zero() -> Self {
        Number::Exact(<BigRational as Zero>::zero())
    }

    pub fn from_i64(v: i64) -> Self {
        Number::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => rational_to_f64(r),
            Number::Float(f) => *f,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Number::Exact(r) => Zero::is_zero(r),
            Number::Float(f) => *f == 0.0,
        }
    }

    pub fn neg(&self) -> Number {
        match self {
            Number::Exact(r) => Number::Exact(-r.clone()),
            Number::Float(f) => Number::Float(-f),
        }
    }
}

impl From<f64> for Number {
    fn from(v: f64) -> Self {
        Number::Float(v)
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Number::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Number::Float(v) => write!(f, "{v:?}"),
        }
    }
}

impl FromStr for Number {
    type Err = ParseError;

    /// Accepts integers, fractions `p/q`, and decimals with optional
    /// exponent. All of these are parsed exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(Number::Exact)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseError::Number(s.to_string()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if Zero::is_zero(&d) {
            return Err(ParseError::Number(s.to_string()));
        }
        return Ok(n / d);
    }
    let (neg, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = body[pos + 1..]
                .parse()
                .map_err(|_| ParseError::Number(s.to_string()))?;
            (&body[..pos], e)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(ParseError::Number(s.to_string()));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(
        digits
            .parse::<BigInt>()
            .map_err(|_| ParseError::Number(s.to_string()))?,
    );
    let scale = exp - frac_part.len() as i64;
    if scale.unsigned_abs() > 4000 {
        return Err(ParseError::Number(s.to_string()));
    }
    let ten = BigRational::from_integer(BigInt::from(10));
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= pow;
    } else {
        value /= pow;
    }
    if neg {
        value = -value;
    }
    Ok(value)
}

/// Converts an exact rational to `i128` when it is an integer that fits.
pub fn rational_to_i128(r: &BigRational) -> Option<i128> {
    if !r.is_integer() {
        return None;
    }
    r.numer().to_i128()
}

pub fn abs_max_rational(values: impl Iterator<Item = BigRational>) -> BigRational {
    values.fold(<BigRational as Zero>::zero(), |acc, v| {
        let a = v.abs();
        if a > acc {
            a
        } else {
            acc
        }
    })
}

/// A structure constant over the base field (real part, imaginary part).
#[derive(Clone, Debug, PartialEq)]
pub struct Coef {
    pub re: Number,
    pub im: Number,
}

impl Coef {
    pub fn real(re: Number) -> Self {
        Coef {
            re,
            im: Number::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.re.as_exact().is_some() && self.im.as_exact().is_some()
    }
}

impl From<f64> for Coef {
    fn from(v: f64) -> Self {
        Coef::real(Number::Float(v))
    }
}

impl From<i64> for Coef {
    fn from(v: i64) -> Self {
        Coef::real(Number::from_i64(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn decimals_round_once() {
        for t in ["-1.6003087428284541", "0.1", "2.718281828459045", "1e-300"] {
            let n: Number = t.parse().unwrap();
            assert_eq!(n.to_f64(), t.parse::<f64>().unwrap(), "{t}");
        }
    }

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("3/2").unwrap(), q(3, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), q(250, 1));
        assert_eq!(parse_rational(" 7 ").unwrap(), q(7, 1));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1.2.3", "nan", "--1", "."] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["3/2", "-7", "1/10"] {
            let n: Number = s.parse().unwrap();
            assert_eq!(n.to_string(), s);
        }
    }
}
