//! Exact rationals and their `{"num": p, "den": q}` serialization.

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = num_rational::Ratio<i64>;

#[derive(Serialize, Deserialize)]
struct Wire {
    num: i64,
    den: i64,
}

pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    Wire {
        num: *r.numer(),
        den: *r.denom(),
    }
    .serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let w = Wire::deserialize(d)?;
    if w.den == 0 {
        return Err(serde::de::Error::custom("zero denominator"));
    }
    Ok(Rational::new(w.num, w.den))
}

/// Serde adapter for `Vec<Rational>`.
pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&Wire {
                num: *r.numer(),
                den: *r.denom(),
            })?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let ws = Vec::<Wire>::deserialize(d)?;
        ws.into_iter()
            .map(|w| {
                if w.den == 0 {
                    Err(serde::de::Error::custom("zero denominator"))
                } else {
                    Ok(Rational::new(w.num, w.den))
                }
            })
            .collect()
    }
}

/// `true` when `r` is an integer.
pub fn is_integral(r: &Rational) -> bool {
    *r.denom() == 1
}

/// Floor division with rounding toward negative infinity.
pub fn div_floor(a: i64, b: i64) -> i64 {
    Integer::div_floor(&a, &b)
}

/// Ceiling division with rounding toward positive infinity.
pub fn div_ceil(a: i64, b: i64) -> i64 {
    -Integer::div_floor(&-a, &b)
}
