//! Serde helpers shared by the report types.

use num_bigint::{BigInt, BigUint};
use serde::Serializer;

/// Big integers travel as decimal strings so consumers never lose precision.
pub fn biguint_str<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn bigint_str<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Fixed 12-digit decimal rendering.
pub fn f64_12<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&format_args!("{v:.12}"))
}
