//! Exact rational helpers shared by the P-space and solver code.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact square root of a non-negative integer, if it exists.
fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a rational, `None` when it is not the square of a
/// rational (including all negative values).
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    // BigRational is always reduced, so numerator and denominator must both be squares.
    let n = int_sqrt(q.numer())?;
    let d = int_sqrt(q.denom())?;
    Some(BigRational::new(n, d))
}

pub fn is_rational_square(q: &Rational) -> bool {
    rational_sqrt(q).is_some()
}

pub fn in_unit_interval(q: &Rational) -> bool {
    !q.is_negative() && *q <= Rational::one()
}

/// Parses `"3/4"`, `"-2"`, or a finite decimal such as `"0.75"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("cannot parse `{s}` as an exact rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Invalid(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{whole_digits}{frac}").parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let value = BigRational::new(digits, scale);
        return Ok(if negative { -value } else { value });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Lossy conversion for display and plotting only.
pub fn to_f64(q: &Rational) -> f64 {
    let n = q.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = q.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    if d.is_finite() && n.is_finite() {
        n / d
    } else {
        // Very large operands: fall back on the sign only.
        match q.numer().sign() {
            Sign::Minus => f64::NEG_INFINITY,
            Sign::NoSign => 0.0,
            Sign::Plus => f64::INFINITY,
        }
    }
}

/// Serde adapter writing rationals as `"n/d"` strings.
pub mod serde_ratio {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }
}

pub mod serde_ratio_opt {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        q: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&format_rational(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_rational(&s).map_err(de::Error::custom))
            .transpose()
    }
}
