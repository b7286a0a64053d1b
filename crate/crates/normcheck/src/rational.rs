//! Exact rational scalars.
//!
//! Every weight, probability and matrix entry in this crate is an
//! arbitrary-precision rational kept in canonical form: positive
//! denominator, numerator and denominator coprime. Values print as
//! `p/q`, or just `p` when the denominator is 1 (`2/3`, `1`, `0`,
//! `-2/3`).

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::error::Error;
use std::fmt;

/// Canonical-form arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

/// Shorthand constructor. Panics if `denom` is zero.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// The integer `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseRationalError {
    Malformed,
    ZeroDenominator,
    NegativeDenominator,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseRationalError::Malformed => write!(f, "malformed rational"),
            ParseRationalError::ZeroDenominator => write!(f, "zero denominator"),
            ParseRationalError::NegativeDenominator => write!(f, "negative denominator"),
        }
    }
}

impl Error for ParseRationalError {}

/// Parses `p/q` or `p`. The denominator, when present, must be strictly
/// positive; the printed form of any [`Rational`] parses back to an equal
/// value.
pub fn parse_rational(token: &str) -> Result<Rational, ParseRationalError> {
    let (numer, denom) = match token.split_once('/') {
        None => (token, "1"),
        Some((n, d)) => (n, d),
    };
    let numer: BigInt = numer.parse().map_err(|_| ParseRationalError::Malformed)?;
    let denom: BigInt = denom.parse().map_err(|_| ParseRationalError::Malformed)?;
    if denom.is_zero() {
        return Err(ParseRationalError::ZeroDenominator);
    }
    if denom.is_negative() {
        return Err(ParseRationalError::NegativeDenominator);
    }
    Ok(Rational::new(numer, denom))
}
