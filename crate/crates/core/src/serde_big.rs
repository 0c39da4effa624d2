//! Big integers as decimal strings in JSON.

use num_bigint::BigInt;
use serde::de::Error;
use serde::{Deserialize, Deserializer, Serializer};

pub(crate) fn one<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn vec<S: Serializer>(x: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(ToString::to_string))
}

pub(crate) fn de_one<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    let text = String::deserialize(d)?;
    text.parse().map_err(|_| D::Error::custom(format!("not a decimal integer: {text:?}")))
}
