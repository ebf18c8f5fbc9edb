//! Exact scalar abstraction shared by the dimension, Euler-form and
//! linear-algebra code.
//!
//! Everything downstream of the Littlewood–Richardson multiplicities is
//! integral, so the scalar only has to be an exact commutative ring with
//! exact division whenever the quotient is known to be integral. `BigInt`
//! is the default; `i128` and `i64` are useful on small boxes, and
//! `BigRational` satisfies the same bounds.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{FromPrimitive, Num, Signed};
use serde::{de, Deserialize, Deserializer, Serializer};
use serde_with::{DeserializeAs, SerializeAs};

pub trait Scalar:
    Clone + Debug + Display + FromStr + Ord + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every exact scalar embeds i64")
    }

    fn from_count(v: u64) -> Self {
        Self::from_u64(v).expect("every exact scalar embeds u64")
    }
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + Display
        + FromStr
        + Ord
        + Num
        + Signed
        + FromPrimitive
        + Send
        + Sync
        + 'static
{
}

/// `(-1)^e` in the scalar ring.
pub fn sign_power<S: Scalar>(e: usize) -> S {
    if e.is_multiple_of(2) {
        S::one()
    } else {
        -S::one()
    }
}

/// Binomial coefficient; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

/// serde adapter writing an exact scalar as a bare JSON number, however
/// large. Relies on serde_json's `arbitrary_precision` feature.
pub struct AsNumber;

impl<S: Display> SerializeAs<S> for AsNumber {
    fn serialize_as<Ser: Serializer>(value: &S, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        let number: serde_json::Number = value
            .to_string()
            .parse()
            .map_err(serde::ser::Error::custom)?;
        serde::Serialize::serialize(&number, serializer)
    }
}

impl<'de, S: FromStr> DeserializeAs<'de, S> for AsNumber {
    fn deserialize_as<D: Deserializer<'de>>(deserializer: D) -> Result<S, D::Error> {
        let number = serde_json::Number::deserialize(deserializer)?;
        number
            .to_string()
            .parse()
            .map_err(|_| de::Error::custom(format!("{number} is not an exact integer")))
    }
}
