//! Scalar traits shared by the matrix code.
//!
//! Everything in the linear-algebra layer is written against these traits so
//! the same routines run on arbitrary-precision values (the default used by
//! every analysis) and on machine integers in tests and benchmarks.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Signed, Zero};

/// A commutative ring element with exact equality.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> {}

impl<T> Scalar for T where T: Clone + Debug + PartialEq + Num + Neg<Output = T> {}

/// Euclidean domain used by Smith and Hermite normal forms.
pub trait EuclideanScalar: Scalar + Integer + Signed {}

impl<T> EuclideanScalar for T where T: Scalar + Integer + Signed {}

/// Marker for exact fields. Row reduction divides by pivots, so floats are
/// deliberately not covered.
pub trait FieldScalar: Scalar {}

impl<T> FieldScalar for Ratio<T> where T: Clone + Debug + Integer + Signed {}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_to_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// `p/q` with `q` omitted when it is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Least common multiple of the denominators in `values` (1 for an empty slice).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn is_integral(r: &BigRational) -> bool {
    r.denom().is_one()
}

/// Serde adapters for `"p/q"` strings.
pub mod serde_rational {
    use num_rational::BigRational;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Int(i64),
    }

    fn from_raw<E: Error>(raw: Raw) -> Result<BigRational, E> {
        match raw {
            Raw::Int(i) => Ok(BigRational::from_integer(i.into())),
            Raw::Text(s) => {
                parse_rational(&s).ok_or_else(|| E::custom(format!("invalid rational {s:?}")))
            }
        }
    }

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        from_raw(Raw::deserialize(d)?)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
            Vec::<Raw>::deserialize(d)?
                .into_iter()
                .map(from_raw)
                .collect()
        }
    }

    pub mod matrix {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(m: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(m.len()))?;
            for row in m {
                let row: Vec<String> = row.iter().map(format_rational).collect();
                seq.serialize_element(&row)?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Vec<Vec<BigRational>>, D::Error> {
            Vec::<Vec<Raw>>::deserialize(d)?
                .into_iter()
                .map(|row| row.into_iter().map(from_raw).collect())
                .collect()
        }
    }
}
