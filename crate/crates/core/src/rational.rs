//! Exact-rational helpers: parsing, formatting, lossy `f64` conversion, and
//! serde adapters that keep rationals as `"p/q"` strings on the wire.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Build `n/d` from machine integers. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Build the integer rational `n`.
pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parse `"p/q"`, an integer string, or a decimal string into an exact
/// rational. Decimal digits convert exactly (`"3.25"` is `13/4`).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::InvalidInput("empty rational literal".into()));
    }
    let bad = || Error::InvalidInput(format!("cannot parse rational from {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let frac: BigInt = frac_part.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = BigRational::new(frac, scale);
        let int = BigRational::from_integer(int_part);
        return Ok(if negative { int - frac } else { int + frac });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Parse a comma-separated list of rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(parse_rational).collect()
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise (reduced).
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Convert to `f64`, tolerating numerators/denominators far beyond the f64
/// range by scaling both sides down first.
pub fn to_f64_lossy(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let Some(f) = r.to_f64() {
        if f.is_finite() {
            return f;
        }
    }
    fn top(x: &BigInt) -> (f64, i64) {
        let bits = x.bits();
        if bits <= 900 {
            (x.to_f64().unwrap_or(0.0), 0)
        } else {
            let shift = bits - 512;
            ((x >> shift).to_f64().unwrap_or(0.0), shift as i64)
        }
    }
    let (nf, ne) = top(r.numer());
    let (df, de) = top(r.denom());
    let exp = (ne - de).clamp(i64::from(i32::MIN), i64::from(i32::MAX)) as i32;
    (nf / df) * 2f64.powi(exp)
}

/// Serde adapter: a single `BigRational` as a `"p/q"` string.
pub mod serde_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(de)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: `Vec<BigRational>` as a JSON array of `"p/q"` strings.
pub mod serde_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Vec<BigRational>, D::Error> {
        let v = Vec::<String>::deserialize(de)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter: `Vec<Vec<BigRational>>` as nested arrays of strings.
pub mod serde_vec_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &[Vec<BigRational>],
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(v.len()))?;
        for row in v {
            seq.serialize_element(&row.iter().map(format_rational).collect::<Vec<_>>())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Vec<Vec<BigRational>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(de)?;
        v.iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_rational("2/3").unwrap(), ratio(2, 3));
        assert_eq!(parse_rational("-7/18").unwrap(), ratio(-7, 18));
        assert_eq!(parse_rational("6").unwrap(), integer(6));
        assert_eq!(parse_rational("3.25").unwrap(), ratio(13, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("0.001").unwrap(), ratio(1, 1000));
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in ["", "1/0", "a", "1.2.3", "2/", "1e3"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn format_reduces_and_round_trips() {
        let r = BigRational::new(BigInt::from(4), BigInt::from(6));
        assert_eq!(format_rational(&r), "2/3");
        assert_eq!(format_rational(&integer(-5)), "-5");
        let back = parse_rational(&format_rational(&ratio(-7, 18))).unwrap();
        assert_eq!(back, ratio(-7, 18));
    }

    #[test]
    fn lossy_f64_handles_huge_operands() {
        let huge = BigInt::from(3u32).pow(4000);
        let r = BigRational::new(huge.clone() * 2, huge);
        assert!((to_f64_lossy(&r) - 2.0).abs() < 1e-12);
    }
}
