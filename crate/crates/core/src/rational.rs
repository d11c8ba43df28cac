//! Exact rational numbers and their textual form.
//!
//! Every distance in the crate is a [`Rational`]. The textual form is the one
//! `BigRational` prints (`"3/4"`, `"2"`, `"-1/3"`); parsing additionally
//! accepts finite decimals such as `"0.75"`.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::str::FromStr;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{0}` as an exact rational")]
pub struct ParseRationalError(pub String);

/// Shorthand for `numer / denom`. Panics when `denom == 0`.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"`, `"p"` or a finite decimal `"a.b"` (optionally signed).
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_int(num.trim()).ok_or_else(err)?;
        let den = parse_int(den.trim()).ok_or_else(err)?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if (digits.is_empty() && frac.is_empty()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let whole_part = if digits.is_empty() {
            BigInt::zero()
        } else {
            parse_int(digits).ok_or_else(err)?
        };
        let scale = num::pow(BigInt::from(10u8), frac.len());
        let frac_part = if frac.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(frac).map_err(|_| err())?
        };
        let magnitude = Rational::new(whole_part * &scale + frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    parse_int(s).map(Rational::from_integer).ok_or_else(err)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub(crate) fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

pub(crate) fn is_positive(value: &Rational) -> bool {
    value.is_positive()
}

pub(crate) fn half(value: &Rational) -> Rational {
    value / Rational::from_integer(BigInt::one() + BigInt::one())
}

/// Serde adapters that store rationals as exact strings.
pub mod serde_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => s.serialize_some(&format_rational(v)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            let text = Option::<String>::deserialize(d)?;
            text.map(|t| parse_rational(&t).map_err(D::Error::custom))
                .transpose()
        }
    }
}
