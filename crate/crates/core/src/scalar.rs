//! The exact scalar type and its string encoding.
//!
//! Rationals are written as `"p"` when the denominator is one and `"p/q"`
//! otherwise, always in lowest terms with `q > 0`.

use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(value: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Scalar {
    Scalar::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn format(value: &Scalar) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn parse(text: &str) -> Result<Scalar> {
    let bad = || Error::Parse(format!("malformed rational {text:?}"));
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (text, None),
    };
    let numer = parse_int(numer).ok_or_else(bad)?;
    let denom = match denom {
        Some(q) => {
            // the denominator carries no sign
            if q.starts_with(['+', '-']) {
                return Err(bad());
            }
            parse_int(q).ok_or_else(bad)?
        }
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Scalar::new(numer, denom))
}

fn parse_int(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(text).ok()
}

pub fn format_all(values: &[Scalar]) -> Vec<String> {
    values.iter().map(format).collect()
}

pub fn parse_all(texts: &[String]) -> Result<Vec<Scalar>> {
    texts.iter().map(|t| parse(t)).collect()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Scalar>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Decimal rendering rounded half away from zero to `digits` places. Display only.
pub fn to_decimal(value: &Scalar, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = value * Scalar::from_integer(scale.clone());
    let rounded = scaled.abs().round().to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if value.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{whole}");
    }
    format!(
        "{sign}{whole}.{:0>width$}",
        frac.to_string(),
        width = digits as usize
    )
}

/// Lossy conversion for logging and timing summaries.
pub fn approx(value: &Scalar) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse("-3/6").unwrap(), ratio(-1, 2));
        assert_eq!(parse("0/5").unwrap(), int(0));
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "3/0", "", "/2", "1/", "1/-2", "1.5", "a", "1/2/3", " 1", "+-1",
        ] {
            assert!(parse(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format(&ratio(4, -8)), "-1/2");
        assert_eq!(format(&int(7)), "7");
        assert_eq!(format(&int(0)), "0");
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(to_decimal(&ratio(1, 3), 9), "0.333333333");
        assert_eq!(to_decimal(&ratio(-2, 3), 3), "-0.667");
        assert_eq!(to_decimal(&int(-3), 2), "-3.00");
        assert_eq!(to_decimal(&ratio(-1, 10_000), 2), "0.00");
    }
}
