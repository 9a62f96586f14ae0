//! Exact rational payoffs.
//!
//! Every comparison in this crate is a strict or weak inequality between
//! payoff sums, so values are kept as reduced fractions of `i64`. On the wire
//! a rational is either a JSON integer or a string `"p/q"` in lowest terms
//! with `q > 1`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

pub type Rational = num_rational::Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalError {
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("non-canonical rational {0:?} (expected lowest terms with positive denominator > 1)")]
    NonCanonical(String),
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Parses `"p/q"` or an integer literal. Rejects anything that is not
/// already in canonical form.
pub fn parse(s: &str) -> Result<Rational, RationalError> {
    let t = s.trim();
    match t.split_once('/') {
        None => t
            .parse::<i64>()
            .map(Rational::from_integer)
            .map_err(|_| RationalError::Malformed(s.to_string())),
        Some((p, q)) => {
            let p: i64 = p
                .parse()
                .map_err(|_| RationalError::Malformed(s.to_string()))?;
            let q: i64 = q
                .parse()
                .map_err(|_| RationalError::Malformed(s.to_string()))?;
            if q <= 1 || p.gcd(&q) != 1 {
                return Err(RationalError::NonCanonical(s.to_string()));
            }
            Ok(Rational::new_raw(p, q))
        }
    }
}

pub fn format(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_json(r: &Rational) -> serde_json::Value {
    if r.is_integer() {
        serde_json::Value::from(*r.numer())
    } else {
        serde_json::Value::from(format(r))
    }
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

pub fn sum<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> Rational {
    it.into_iter().fold(Rational::zero(), |acc, x| acc + x)
}

pub fn one() -> Rational {
    Rational::one()
}

/// `serde(with = "rational::serde_rational")` for a single value.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        if r.is_integer() {
            s.serialize_i64(*r.numer())
        } else {
            s.serialize_str(&format(r))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }
}

/// `serde(with = "rational::serde_vec")` for a list of values.
pub mod serde_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&Q(*r))?;
        }
        seq.end()
    }
}

/// Newtype so that nested `Vec`s of rationals get serde support for free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Q(pub Rational);

impl serde::Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_rational::serialize(&self.0, s)
    }
}

impl<'de> serde::Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        serde_rational::deserialize(d).map(Q)
    }
}

impl From<Rational> for Q {
    fn from(r: Rational) -> Self {
        Q(r)
    }
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a canonical \"p/q\" string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
        Ok(Rational::from_integer(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
        i64::try_from(v)
            .map(Rational::from_integer)
            .map_err(|_| E::custom("integer out of range"))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
        Err(E::custom(format_args!(
            "floating point payoff {v} not allowed; use \"p/q\""
        )))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
        parse(v).map_err(E::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_canonical_forms() {
        assert_eq!(parse("7").unwrap(), int(7));
        assert_eq!(parse("-3/4").unwrap(), frac(-3, 4));
        assert_eq!(format(&frac(10, 4)), "5/2");
    }

    #[test]
    fn parse_rejects_non_canonical() {
        assert!(matches!(parse("2/4"), Err(RationalError::NonCanonical(_))));
        assert!(matches!(parse("3/1"), Err(RationalError::NonCanonical(_))));
        assert!(matches!(parse("3/-4"), Err(RationalError::NonCanonical(_))));
        assert!(matches!(parse("x"), Err(RationalError::Malformed(_))));
        assert!(matches!(parse("1/0"), Err(RationalError::NonCanonical(_))));
    }

    #[test]
    fn json_round_trip() {
        let v: Vec<Q> = serde_json::from_str(r#"[1, "1/2", -4, "-7/3"]"#).unwrap();
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"[1,"1/2",-4,"-7/3"]"#
        );
        assert!(serde_json::from_str::<Q>("1.5").is_err());
    }
}
