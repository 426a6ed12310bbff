//! Exact rational helpers.
//!
//! Drift coefficients are kept as `BigRational` so that averaged equations
//! can be compared for equality instead of within a tolerance. Floating
//! inputs are read through their shortest round-trip decimal form, so
//! `0.144` becomes `18/125` rather than the nearest dyadic.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Converts a finite `f64` to the exact rational named by its shortest
/// round-trip decimal representation.
pub fn rational_from_decimal(value: f64) -> Result<BigRational> {
    if !value.is_finite() {
        return Err(Error::NonRationalCoefficient(format!(
            "{value} is not finite"
        )));
    }
    if value == 0.0 {
        return Ok(BigRational::zero());
    }
    // `{:e}` prints the shortest mantissa that round-trips, e.g. "1.44e-1".
    let text = format!("{value:e}");
    let (mantissa, exp) = text
        .split_once('e')
        .expect("LowerExp formatting always contains an exponent");
    let exp: i64 = exp.parse().expect("exponent is a decimal integer");
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits: String = format!("{int_part}{frac_part}");
    let numerator: BigInt = digits.parse().expect("mantissa digits parse as integer");
    let shift = exp - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let rational = if shift >= 0 {
        BigRational::from_integer(numerator * ten.pow(shift as u32))
    } else {
        BigRational::new(numerator, ten.pow((-shift) as u32))
    };
    Ok(rational)
}

/// Nearest `f64` to an exact rational.
pub fn rational_to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Exact square root, if the rational is a perfect square.
pub fn rational_sqrt_exact(value: &BigRational) -> Option<BigRational> {
    if value.is_negative() {
        return None;
    }
    let num = value.numer().sqrt();
    let den = value.denom().sqrt();
    if &(&num * &num) == value.numer() && &(&den * &den) == value.denom() {
        Some(BigRational::new(num, den))
    } else {
        None
    }
}

/// Renders a reduced rational as `p/q`, or just `p` when q = 1.
pub fn format_rational(value: &BigRational) -> String {
    if value.denom().is_one() {
        format!("{}", value.numer())
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Rational from an integer pair, reduced.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// String pair (numerator, denominator) for JSON output. Emitted as decimal
/// strings so arbitrarily large exact values survive JSON round-trips.
pub fn rational_string_pair(value: &BigRational) -> (String, String) {
    (value.numer().to_string(), value.denom().to_string())
}

/// Sign of the numerator: -1, 0 or 1.
pub fn rational_sign(value: &BigRational) -> i8 {
    match value.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
