//! Complex scalar backends.
//!
//! Everything above this module is generic over [`Scalar`]. Two backends are
//! provided: [`Complex64`] (the production path) and [`Exact`], a complex
//! number with arbitrary-precision rational parts that never rounds.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Gaussian-rational complex number.
pub type Exact = Complex<BigRational>;

/// Denominators below this magnitude count as a pole in the float backend.
pub const FLOAT_POLE_EPS: f64 = 1e-300;

/// Tolerance for matching denominator-factor parameters in the float backend.
pub const FLOAT_MATCH_TOL: f64 = 1e-12;

/// Relative size of a polynomial-division remainder that the float backend
/// still treats as an exact division.
pub const FLOAT_DIVISION_TOL: f64 = 1e-5;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for backends whose field operations never round.
    const EXACT: bool;
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    /// The real number `num / den`.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_exact(x: &Exact) -> Self;
    fn to_c64(&self) -> Complex64;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Whether a denominator value counts as a pole.
    fn is_pole_zero(&self) -> bool;

    /// Parameter equality used by factor bags.
    fn matches(&self, other: &Self) -> bool;

    /// Whether `self` is zero relative to `scale` (a remainder test).
    fn is_negligible(&self, scale: f64) -> bool;

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    fn powi(&self, k: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }

    /// Textual real and imaginary parts. Exact values print as `p/q`,
    /// floats as the shortest round-tripping decimal.
    fn to_text(&self) -> (String, String);
}

impl Scalar for Complex64 {
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn from_exact(x: &Exact) -> Self {
        exact_to_c64(x)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn is_pole_zero(&self) -> bool {
        self.norm() < FLOAT_POLE_EPS
    }

    fn matches(&self, other: &Self) -> bool {
        (self - other).norm() <= FLOAT_MATCH_TOL
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.norm() <= FLOAT_DIVISION_TOL * scale.max(f64::MIN_POSITIVE)
    }

    fn to_text(&self) -> (String, String) {
        (format!("{}", self.re), format!("{}", self.im))
    }
}

impl Scalar for Exact {
    const EXACT: bool = true;
    const NAME: &'static str = "exact";

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    fn from_exact(x: &Exact) -> Self {
        x.clone()
    }

    fn to_c64(&self) -> Complex64 {
        exact_to_c64(self)
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_pole_zero(&self) -> bool {
        Scalar::is_zero(self)
    }

    fn matches(&self, other: &Self) -> bool {
        self == other
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        Scalar::is_zero(self)
    }

    fn to_text(&self) -> (String, String) {
        (self.re.to_string(), self.im.to_string())
    }
}

/// Rounds each part to the nearest double.
pub fn exact_to_c64(x: &Exact) -> Complex64 {
    Complex64::new(
        x.re.to_f64().unwrap_or(f64::NAN),
        x.im.to_f64().unwrap_or(f64::NAN),
    )
}

pub fn exact(re: BigRational, im: BigRational) -> Exact {
    Complex::new(re, im)
}

/// Exact complex `(re_num/re_den) + i (im_num/im_den)`.
pub fn gauss(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Exact {
    Complex::new(
        BigRational::new(re_num.into(), re_den.into()),
        BigRational::new(im_num.into(), im_den.into()),
    )
}

/// Exact complex with integer parts.
pub fn gauss_int(re: i64, im: i64) -> Exact {
    gauss(re, 1, im, 1)
}

/// Exact binary value of a double.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {input:?} as a rational number")]
pub struct ParseRationalError {
    pub input: String,
}

/// Parses `p/q`, plain integers, and decimals with an optional exponent
/// (`-1.25`, `3e-2`) into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError {
        input: text.to_string(),
    };
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_decimal(num.trim()).ok_or_else(err)?;
        let den = parse_decimal(den.trim()).ok_or_else(err)?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(num / den);
    }
    parse_decimal(s).ok_or_else(err)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        for _ in 0..scale {
            value *= ten.clone();
        }
    } else {
        for _ in 0..(-scale) {
            value /= ten.clone();
        }
    }
    Some(if negative { -value } else { value })
}

/// Squared modulus of an exact value, kept exact.
pub fn norm_sqr_exact(x: &Exact) -> BigRational {
    x.re.clone() * x.re.clone() + x.im.clone() * x.im.clone()
}

/// Whether an exact value has modulus one.
pub fn is_unimodular_exact(x: &Exact) -> bool {
    norm_sqr_exact(x).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        let third = parse_rational("1/3").unwrap();
        assert_eq!(third, BigRational::new(1.into(), 3.into()));
        assert_eq!(
            parse_rational("-1.25").unwrap(),
            BigRational::new((-5).into(), 4.into())
        );
        assert_eq!(
            parse_rational("3e-2").unwrap(),
            BigRational::new(3.into(), 100.into())
        );
        assert_eq!(parse_rational("0.1").unwrap(), BigRational::new(1.into(), 10.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn exact_division_is_exact() {
        let a = gauss_int(1, 2);
        let b = gauss_int(3, -1);
        let q = a.clone() / b.clone();
        assert_eq!(q * b, a);
    }

    #[test]
    fn conversion_rounds_to_nearest() {
        let x = gauss(1, 3, -2, 7);
        let c = x.to_c64();
        assert_eq!(c.re, 1.0 / 3.0);
        assert_eq!(c.im, -2.0 / 7.0);
    }

    #[test]
    fn float_matching_uses_tolerance() {
        let a = Complex64::new(1.0, 0.0);
        assert!(a.matches(&Complex64::new(1.0 + 1e-13, 0.0)));
        assert!(!a.matches(&Complex64::new(1.0 + 1e-11, 0.0)));
        assert!(gauss_int(1, 0).matches(&gauss(2, 2, 0, 1)));
    }
}
