//! Scalar types for measures, thresholds and step-function coefficients.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Num, Signed};

/// Ordered field used for measure values. Exact rationals are the default;
/// floating point is accepted where an approximate answer is enough.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + FromStr + Send + Sync + 'static
{
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_count(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
}

impl Scalar for Ratio<i64> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
}

impl Scalar for Ratio<i128> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }
}

/// Serde helpers that write scalars as their `Display` form (`"13/24"`).
pub mod as_string {
    use super::Scalar;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Scalar, Ser: Serializer>(v: &S, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, S: Scalar, D: Deserializer<'de>>(d: D) -> Result<S, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<S>().map_err(|_| D::Error::custom(format!("bad scalar {s:?}")))
    }
}
