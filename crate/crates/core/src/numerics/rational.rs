//! Exact rationals: parsing, rendering and a few helpers on top of
//! `num_rational::BigRational`.

use std::fmt::Write as _;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
pub type ExactRational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> ExactRational {
    ExactRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> ExactRational {
    ExactRational::from_integer(BigInt::from(value))
}

/// `2^-k` as an exact rational.
pub fn pow2_neg(k: u32) -> ExactRational {
    ExactRational::new(BigInt::one(), BigInt::one() << k as usize)
}

/// Parses `a/b`, integers, finite decimals (`0.902`, `-1.5e-3` is not
/// accepted) and integer powers (`2^40`, `1/2^40`).
///
/// Decimals are converted exactly: `0.902` becomes `451/500`.
pub fn parse_rational(input: &str) -> Result<ExactRational> {
    let token = input.trim();
    let fail = |reason: &str| Error::Parse {
        token: input.to_string(),
        reason: reason.to_string(),
    };
    if token.is_empty() {
        return Err(fail("empty input"));
    }
    match token.split_once('/') {
        Some((num, den)) => {
            let num = parse_term(num).ok_or_else(|| fail("bad numerator"))?;
            let den = parse_term(den).ok_or_else(|| fail("bad denominator"))?;
            if den.is_zero() {
                return Err(fail("zero denominator"));
            }
            Ok(num / den)
        }
        None => parse_term(token).ok_or_else(|| fail("expected a/b, an integer or a decimal")),
    }
}

fn parse_term(term: &str) -> Option<ExactRational> {
    let term = term.trim();
    if let Some((base, exp)) = term.split_once('^') {
        let base = parse_decimal(base)?;
        let exp: u32 = exp.trim().parse().ok()?;
        return Some(Pow::pow(base, exp));
    }
    parse_decimal(term)
}

fn parse_decimal(text: &str) -> Option<ExactRational> {
    let text = text.trim();
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut mantissa = String::with_capacity(whole.len() + frac.len());
    mantissa.push_str(whole);
    mantissa.push_str(frac);
    let mut numer: BigInt = mantissa.parse().ok()?;
    if negative {
        numer = -numer;
    }
    let denom = Pow::pow(BigInt::from(10u32), frac.len() as u32);
    Some(ExactRational::new(numer, denom))
}

/// Renders as `numerator/denominator`, or just the numerator for integers.
pub fn format_rational(value: &ExactRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal rendering truncated toward zero after `places` digits, computed
/// by exact long division.
pub fn to_decimal_string(value: &ExactRational, places: usize) -> String {
    let mut out = String::new();
    if value.is_negative() {
        out.push('-');
    }
    let numer = value.numer().abs();
    let denom = value.denom();
    let (whole, mut rem) = numer.div_rem(denom);
    write!(out, "{whole}").unwrap();
    if places > 0 {
        out.push('.');
        for _ in 0..places {
            rem *= 10;
            let (digit, r) = rem.div_rem(denom);
            write!(out, "{digit}").unwrap();
            rem = r;
        }
    }
    out
}

/// Nearest `f64`, for display and reporting only.
pub fn to_f64(value: &ExactRational) -> f64 {
    let (numer, denom) = (value.numer(), value.denom());
    let shift = numer.bits().max(denom.bits()).saturating_sub(1000) as usize;
    let n = bigint_to_f64(&(numer >> shift));
    let d = bigint_to_f64(&(denom >> shift));
    if d == 0.0 {
        // numerator dwarfs the denominator
        return if numer.sign() == Sign::Minus { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    n / d
}

fn bigint_to_f64(value: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

/// `(numerator, denominator)` of a rational as owned big integers.
pub fn parts(value: &ExactRational) -> (BigInt, BigInt) {
    (value.numer().clone(), value.denom().clone())
}

pub fn is_strictly_between_zero_and_one(value: &ExactRational) -> bool {
    value.is_positive() && value < &ExactRational::one()
}

pub mod serde_string {
    //! Serializes an [`ExactRational`] as a `"num/den"` string.
    use super::{format_rational, parse_rational, ExactRational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &ExactRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ExactRational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
