//! Exact rational weights and radii.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// Exact rational used for weights, norms and radii.
pub type Rat = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational `{0}`")]
pub struct ParseRatError(pub String);

/// Parses `"5"`, `"-3/4"` or a short decimal such as `"2.5"`.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let t = s.trim();
    let err = || ParseRatError(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| err())?;
        let d: i64 = d.trim().parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let neg = int.starts_with('-');
        let int_part: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| err())?
        };
        let scale = 10i64.pow(frac.len() as u32);
        let frac_part: i64 = frac.parse().map_err(|_| err())?;
        let magnitude = int_part.abs() * scale + frac_part;
        let signed = if neg { -magnitude } else { magnitude };
        return Ok(Rat::new(signed, scale));
    }
    t.parse::<i64>().map(Rat::from_integer).map_err(|_| err())
}

/// Canonical string form: `"5"` for integers, `"p/q"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_nonnegative(r: &Rat) -> bool {
    !r.is_negative()
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n)
}

pub fn max_rat<I: IntoIterator<Item = Rat>>(it: I) -> Rat {
    it.into_iter().fold(Rat::zero(), |a, b| if b > a { b } else { a })
}

/// Serde adapter that writes rationals as strings.
pub mod serde_string {
    use super::{fmt_rat, parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rat(&raw).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integer_fraction_and_decimal() {
        assert_eq!(parse_rat("5").unwrap(), rat(5));
        assert_eq!(parse_rat("-3/4").unwrap(), Rat::new(-3, 4));
        assert_eq!(parse_rat("6/8").unwrap(), Rat::new(3, 4));
        assert_eq!(parse_rat("2.5").unwrap(), Rat::new(5, 2));
        assert_eq!(parse_rat("-0.25").unwrap(), Rat::new(-1, 4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(fmt_rat(&rat(7)), "7");
        assert_eq!(fmt_rat(&Rat::new(10, 4)), "5/2");
        assert_eq!(fmt_rat(&Rat::new(-1, 2)), "-1/2");
    }
}
