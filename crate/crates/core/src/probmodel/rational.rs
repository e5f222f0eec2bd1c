//! Exact rational probabilities.
//!
//! All probability masses are arbitrary-precision rationals so that the
//! support tests (`> 0`) and row comparisons (`==`) used by the
//! characterization are exact. Only logarithmic quantities become floats.

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

/// Builds `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"a/b"` or `"a"` with an optional leading sign; `b` must be positive.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let err = |reason| Error::InvalidRational {
        input: input.to_string(),
        reason,
    };
    let (sign, body) = match input.as_bytes().first() {
        Some(b'-') => (-1, &input[1..]),
        Some(b'+') => (1, &input[1..]),
        Some(_) => (1, input),
        None => return Err(err("empty string")),
    };
    let (num_str, den_str) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num_str) {
        return Err(err("numerator is not a decimal integer"));
    }
    let num: BigInt = num_str.parse().map_err(|_| err("bad numerator"))?;
    let den: BigInt = match den_str {
        Some(d) if !digits(d) => return Err(err("denominator is not a decimal integer")),
        Some(d) => d.parse().map_err(|_| err("bad denominator"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(num * sign, den))
}

/// Canonical text form: lowest terms, `"a"` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(zero(), |acc, v| acc + v)
}
