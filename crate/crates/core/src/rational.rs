//! Exact rational numbers.
//!
//! Every real-valued quantity in the crate is a [`Rational`]: map values,
//! heights, split indices and edge lengths.

use alloc::string::ToString;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p"` or `"p/q"` with optional sign. Decimal points are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(text.to_string());
    let trimmed = text.trim();
    let (numer, denom) = match trimmed.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (trimmed, "1"),
    };
    let valid = |s: &str, signed: bool| {
        let digits = if signed { s.strip_prefix(['-', '+']).unwrap_or(s) } else { s };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(numer, true) || !valid(denom, false) {
        return Err(bad());
    }
    let p: BigInt = numer.trim_start_matches('+').parse().map_err(|_| bad())?;
    let q: BigInt = denom.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Parses a decimal literal such as `"0.25"` or `"-3"` exactly.
pub fn parse_decimal(text: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(text.to_string());
    let t = text.trim();
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mut digits = alloc::string::String::from(int_part);
    digits.push_str(frac_part);
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, v.denom()))
}

pub fn is_positive(value: &Rational) -> bool {
    value.is_positive()
}
