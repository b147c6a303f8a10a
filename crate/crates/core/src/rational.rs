//! Exact rational helpers on top of [`num_rational::BigRational`].
//!
//! Every finite `f64` is a dyadic rational, so [`from_f64`] is exact. Decimal
//! strings such as `"2.5"` or `"1e-8"` are parsed exactly as well, so a value
//! typed on the command line is never routed through binary floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{HornError, Result};

pub type Rational = BigRational;

/// Exact rational value of a finite double.
pub fn from_f64(x: f64) -> Result<Rational> {
    BigRational::from_float(x)
        .ok_or_else(|| HornError::InvalidArgument(format!("non-finite value {x}")))
}

pub fn from_i64(x: i64) -> Rational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest double. Handles numerators and denominators beyond the `f64` range
/// by shifting both to a common bit length first.
pub fn to_f64(x: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let ns = (x.numer().bits() as i64 - 64).max(0);
    let ds = (x.denom().bits() as i64 - 64).max(0);
    let n = (x.numer() >> ns as usize).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> ds as usize).to_f64().unwrap_or(1.0);
    let mut q = n / d;
    let mut e = ns - ds;
    while e != 0 && q != 0.0 && q.is_finite() {
        let step = e.clamp(-1000, 1000);
        q *= 2f64.powi(step as i32);
        e -= step;
    }
    q
}

/// Parse `"3"`, `"-7/4"`, `"2.5"`, `"1e-8"`, `"-1.25E+3"` exactly.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(HornError::Parse("empty number".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| HornError::Parse(format!("bad numerator in {s:?}")))?;
        let d: BigInt = d.trim().parse().map_err(|_| HornError::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(HornError::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..]
                .parse()
                .map_err(|_| HornError::Parse(format!("bad exponent in {s:?}")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(HornError::Parse(format!("no digits in {s:?}")));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(HornError::Parse(format!("invalid number {s:?}")));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().unwrap_or_default());
    let scale = exponent - frac_part.len() as i64;
    let ten = BigRational::from_integer(BigInt::from(10));
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= pow;
    } else {
        value /= pow;
    }
    Ok(if negative { -value } else { value })
}

/// Comma-separated list of exact rationals.
pub fn parse_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse).collect()
}

/// `"p/q"`, or `"p"` for integers.
pub fn format(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(crate) mod serde_rational {
    //! Serialize as `"p/q"` strings; accept strings or JSON numbers.
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        from_json(&v).map_err(D::Error::custom)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Rational> {
        match v {
            serde_json::Value::String(s) => parse(s),
            serde_json::Value::Number(n) => parse(&n.to_string()),
            other => Err(HornError::Parse(format!("expected a number, found {other}"))),
        }
    }
}

pub(crate) mod serde_rational_vec {
    use super::*;
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        v.iter()
            .map(serde_rational::from_json)
            .collect::<Result<_>>()
            .map_err(D::Error::custom)
    }
}

pub(crate) mod serde_rational_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&format(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        use serde::de::Error;
        match Option::<serde_json::Value>::deserialize(d)? {
            None | Some(serde_json::Value::Null) => Ok(None),
            Some(v) => serde_rational::from_json(&v).map(Some).map_err(D::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse("2.5").unwrap(), ratio(5, 2));
        assert_eq!(parse("-0.125").unwrap(), ratio(-1, 8));
        assert_eq!(parse("1e-8").unwrap(), ratio(1, 100_000_000));
        assert_eq!(parse("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse("+4").unwrap(), from_i64(4));
        assert_eq!(parse("1.5E2").unwrap(), from_i64(150));
        assert!(parse("abc").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn float_round_trip_is_exact() {
        for x in [0.1, -3.75, 1e-300, 1.0e300, 2f64.powi(-60)] {
            let r = from_f64(x).unwrap();
            assert_eq!(to_f64(&r), x);
        }
        assert!(from_f64(f64::NAN).is_err());
    }

    #[test]
    fn huge_ratio_to_f64() {
        let big = BigRational::new(BigInt::from(3) << 2000usize, BigInt::from(1) << 2000usize);
        assert_eq!(to_f64(&big), 3.0);
    }
}
