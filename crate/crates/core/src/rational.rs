//! Exact rational numbers and their textual form.
//!
//! Inputs are accepted as decimals (`87.5`) or fractions (`175/2`). Output
//! uses a decimal when the expansion terminates and a reduced fraction
//! otherwise, so every value written by this crate parses back exactly.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_u64(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn parse(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let num = parse_decimal(n.trim()).ok_or_else(err)?;
        let den = parse_decimal(d.trim()).ok_or_else(err)?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(num / den);
    }
    parse_decimal(s).ok_or_else(err)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (negative, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mantissa: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let scale = num_traits::pow(BigInt::from(10u8), frac_part.len());
    let value = Rational::new(mantissa, scale);
    Some(if negative { -value } else { value })
}

/// Decimal when the expansion terminates, otherwise `num/den`.
pub fn format(value: &Rational) -> String {
    if value.is_integer() {
        return value.numer().to_string();
    }
    let den = value.denom().clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    let mut rest = den.clone();
    let two = BigInt::from(2u8);
    let five = BigInt::from(5u8);
    while rest.is_multiple_of(&two) {
        rest /= &two;
        twos += 1;
    }
    while rest.is_multiple_of(&five) {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let places = twos.max(fives);
    let scaled = value.numer().abs() * num_traits::pow(BigInt::from(10u8), places) / &den;
    let digits = format!("{:0>width$}", scaled.to_string(), width = places + 1);
    let (int_digits, frac_digits) = digits.split_at(digits.len() - places);
    let sign = if value.is_negative() { "-" } else { "" };
    format!("{sign}{int_digits}.{}", frac_digits.trim_end_matches('0'))
}

/// Largest integer `<= value`.
pub fn floor(value: &Rational) -> BigInt {
    value.numer().div_floor(value.denom())
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter writing rationals in the textual form above.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub Rational);

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format(&self.0))
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format(&self.0))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Literal {
            Int(i64),
            // Shortest round-trip text of the float, i.e. the decimal the user wrote.
            Float(f64),
            Text(String),
        }
        let text = match Literal::deserialize(deserializer)? {
            Literal::Int(n) => return Ok(Exact(int(n))),
            Literal::Float(x) if x.is_finite() => format!("{x}"),
            Literal::Float(x) => {
                return Err(serde::de::Error::custom(format!("non-finite number {x}")))
            }
            Literal::Text(s) => s,
        };
        parse(&text).map(Exact).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse("87.5").unwrap(), ratio(175, 2));
        assert_eq!(parse("175/2").unwrap(), ratio(175, 2));
        assert_eq!(parse("-0.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse("3.").unwrap(), int(3));
        assert_eq!(parse("1.5/3").unwrap(), ratio(1, 2));
        assert_eq!(parse(" 90 ").unwrap(), int(90));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1e3", "--1", ".", "1/2/3", "0x10"] {
            assert!(parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn formats_terminating_as_decimal() {
        assert_eq!(format(&ratio(175, 2)), "87.5");
        assert_eq!(format(&int(90)), "90");
        assert_eq!(format(&ratio(-1, 40)), "-0.025");
        assert_eq!(format(&ratio(1, 3)), "1/3");
        assert_eq!(format(&ratio(-7, 6)), "-7/6");
        assert_eq!(format(&ratio(9, 4)), "2.25");
    }

    #[test]
    fn floor_rounds_down() {
        assert_eq!(floor(&ratio(5, 6)), BigInt::from(0));
        assert_eq!(floor(&ratio(-1, 2)), BigInt::from(-1));
        assert_eq!(floor(&int(2)), BigInt::from(2));
    }

    proptest::proptest! {
        #[test]
        fn format_parse_round_trip(n in -100_000i64..100_000, d in 1i64..5_000) {
            let value = ratio(n, d);
            proptest::prop_assert_eq!(parse(&format(&value)).unwrap(), value);
        }
    }
}
