//! Exact rational numbers for weights, distances and bound arithmetic.

use num_rational::Ratio;
use serde::{de, Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

/// Parses `num/den` or a bare integer.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: i64 = num
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("bad numerator in {s:?}")))?;
            let den: i64 = den
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("bad denominator in {s:?}")))?;
            if den == 0 {
                return Err(Error::input(format!("zero denominator in {s:?}")));
            }
            Rational::new(num, den)
        }
        None => int(s.parse().map_err(|_| Error::input(format!("bad rational {s:?}")))?),
    };
    Ok(value)
}

/// Always `num/den`, also for integers, so files stay uniform.
pub fn format(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub(crate) fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format(q))
}

pub(crate) fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }
    match Repr::deserialize(d)? {
        Repr::Int(v) => Ok(int(v)),
        Repr::Str(s) => parse(&s).map_err(de::Error::custom),
    }
}

pub(crate) fn ceil_to_u64(q: &Rational) -> u64 {
    let c = q.ceil();
    (*c.numer()).max(0) as u64
}

pub(crate) fn floor_to_u64(q: &Rational) -> u64 {
    let f = q.floor();
    (*f.numer()).max(0) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse("3/6").unwrap(), Rational::new(1, 2));
        assert_eq!(parse(" 7 ").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert_eq!(format(&int(4)), "4/1");
    }

    #[test]
    fn rounding_helpers() {
        assert_eq!(ceil_to_u64(&Rational::new(6, 3)), 2);
        assert_eq!(ceil_to_u64(&Rational::new(7, 3)), 3);
        assert_eq!(floor_to_u64(&Rational::new(7, 3)), 2);
    }
}
