//! Serde helpers for big numbers: integers are written as JSON numbers when
//! they fit in 64 bits and as decimal strings otherwise; rationals are
//! always strings (`"p/q"` or `"p"`).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

#[derive(Serialize)]
#[serde(untagged)]
enum Num {
    Signed(i64),
    Unsigned(u64),
    Text(String),
}

fn of_int(v: &BigInt) -> Num {
    v.to_i64()
        .map_or_else(|| Num::Text(v.to_string()), Num::Signed)
}

fn of_uint(v: &BigUint) -> Num {
    v.to_u64()
        .map_or_else(|| Num::Text(v.to_string()), Num::Unsigned)
}

pub fn uint<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    of_uint(value).serialize(s)
}

pub fn int_seq<S: Serializer>(values: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(of_int))
}

pub fn uint_seq<S: Serializer>(values: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(of_uint))
}

pub fn rational<S: Serializer>(value: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}
