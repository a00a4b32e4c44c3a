//! Ground-field scalars.
//!
//! Two instantiations exist: exact rationals ([`Rational`]) and `f64`. The
//! choice is made once per computation by the type parameter, so exact and
//! float values can never be mixed inside one context.

use alloc::string::{String, ToString};
use core::fmt::{Debug, Display};
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Default comparison tolerance for float mode.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    /// `true` for exact arithmetic.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(value: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }
    /// Exact conversion from a rational (rounded in float mode).
    fn from_rational(value: &Rational) -> Self;
    /// Conversion from a float; exact mode converts the binary value exactly.
    fn from_f64(value: f64) -> Option<Self>;

    fn is_zero(&self) -> bool;
    /// Zero test under the context tolerance. Exact mode ignores `tol`.
    fn is_negligible(&self, tol: f64) -> bool;
    fn to_f64(&self) -> f64;
    fn magnitude(&self) -> f64 {
        libm::fabs(self.to_f64())
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_rational(value: &Rational) -> Self {
        value.clone()
    }
    fn from_f64(value: f64) -> Option<Self> {
        BigRational::from_float(value)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn magnitude(&self) -> f64 {
        Scalar::to_f64(&self.abs())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(value: i64) -> Self {
        value as f64
    }
    fn from_rational(value: &Rational) -> Self {
        ToPrimitive::to_f64(value).unwrap_or(f64::NAN)
    }
    fn from_f64(value: f64) -> Option<Self> {
        value.is_finite().then_some(value)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_negligible(&self, tol: f64) -> bool {
        libm::fabs(*self) <= tol
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"-0.25"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if Zero::is_zero(&den) {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Ok(int) = text.parse::<BigInt>() {
        return Some(BigRational::from_integer(int));
    }
    // Decimal literal: split mantissa/exponent by hand so the value stays exact.
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if frac_part.chars().any(|c| !c.is_ascii_digit()) {
        return None;
    }
    let mut digits = String::from(int_part);
    digits.push_str(frac_part);
    let numer: BigInt = digits.parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

/// Parses a scalar in the representation appropriate to `S`.
pub fn parse_scalar<S: Scalar>(text: &str) -> Option<S> {
    if S::EXACT {
        parse_rational(text).map(|q| S::from_rational(&q))
    } else {
        match text.trim().parse::<f64>() {
            Ok(v) => S::from_f64(v),
            Err(_) => parse_rational(text).map(|q| S::from_rational(&q)),
        }
    }
}

/// Serializes a scalar as `"p/q"` / `"p"` (exact) or a round-trippable float string.
pub fn format_scalar<S: Scalar>(value: &S) -> String {
    value.to_string()
}
