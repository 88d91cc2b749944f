//! JSON formats.
//!
//! Gram: `{"rank": n, "gram": [[...], ...]}` with integer entries of any size.
//! Manifold: `{"b1": int, "form": <Gram>}`.
//!
//! Integers go through `serde_json`'s arbitrary-precision numbers so entries
//! beyond 64 bits survive a round trip.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Number, Value};
use thiserror::Error;

use crate::lattice::{GramMatrix, LatticeError, LatticeVector};
use crate::manifold::ManifoldDescriptor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("field `{field}`: {msg}")]
    Field { field: String, msg: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Parse {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        }
    }
}

fn field_err(field: impl Into<String>, msg: impl Into<String>) -> FormatError {
    FormatError::Field {
        field: field.into(),
        msg: msg.into(),
    }
}

pub fn bigint_to_number(x: &BigInt) -> Number {
    Number::from_str(&x.to_string()).expect("decimal integers are valid JSON numbers")
}

/// Accepts only plain decimal integers (no fraction or exponent).
pub fn number_to_bigint(n: &Number) -> Option<BigInt> {
    let s = n.to_string();
    let digits = s.strip_prefix('-').unwrap_or(&s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(&s).ok()
}

fn value_to_bigint(v: &Value, field: &str) -> Result<BigInt, FormatError> {
    match v {
        Value::Number(n) => {
            number_to_bigint(n).ok_or_else(|| field_err(field, format!("expected an integer, got {n}")))
        }
        other => Err(field_err(
            field,
            format!("expected an integer, got {}", kind(other)),
        )),
    }
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

/// Parses a Gram object out of an already-decoded JSON value. `prefix` is
/// prepended to field names in diagnostics.
pub fn gram_from_value(v: &Value, prefix: &str) -> Result<GramMatrix, FormatError> {
    let obj = v
        .as_object()
        .ok_or_else(|| field_err(prefix_or_root(prefix), "expected an object"))?;
    let rank_field = format!("{prefix}rank");
    let gram_field = format!("{prefix}gram");
    let rank = obj
        .get("rank")
        .ok_or_else(|| field_err(&rank_field, "missing"))?;
    let rank = rank
        .as_u64()
        .ok_or_else(|| field_err(&rank_field, "expected a nonnegative integer"))?
        as usize;
    let rows = obj
        .get("gram")
        .ok_or_else(|| field_err(&gram_field, "missing"))?
        .as_array()
        .ok_or_else(|| field_err(&gram_field, "expected an array of rows"))?;
    if rows.len() != rank {
        return Err(LatticeError::BadShape(format!(
            "{rank_field} is {rank} but {gram_field} has {} rows",
            rows.len()
        ))
        .into());
    }
    let mut out = Vec::with_capacity(rank);
    for (i, row) in rows.iter().enumerate() {
        let name = format!("{gram_field}[{i}]");
        let row = row
            .as_array()
            .ok_or_else(|| field_err(&name, "expected an array"))?;
        if row.len() != rank {
            return Err(LatticeError::BadShape(format!(
                "{name} has {} entries, expected {rank}",
                row.len()
            ))
            .into());
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, x)| value_to_bigint(x, &format!("{name}[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(parsed);
    }
    Ok(GramMatrix::new(out)?)
}

fn prefix_or_root(prefix: &str) -> String {
    if prefix.is_empty() {
        "<root>".into()
    } else {
        prefix.trim_end_matches('.').to_string()
    }
}

pub fn gram_to_value(g: &GramMatrix) -> Value {
    let rows: Vec<Value> = (0..g.rank())
        .map(|i| {
            Value::Array(
                g.row(i)
                    .iter()
                    .map(|x| Value::Number(bigint_to_number(x)))
                    .collect(),
            )
        })
        .collect();
    serde_json::json!({ "rank": g.rank(), "gram": rows })
}

pub fn parse_gram(text: &str) -> Result<GramMatrix, FormatError> {
    let v: Value = serde_json::from_str(text)?;
    gram_from_value(&v, "")
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Reads and validates a Gram JSON file.
pub fn load_gram(path: &Path) -> Result<GramMatrix, FormatError> {
    parse_gram(&read(path)?)
}

pub fn parse_manifold(text: &str) -> Result<ManifoldDescriptor, FormatError> {
    let v: Value = serde_json::from_str(text)?;
    let obj = v
        .as_object()
        .ok_or_else(|| field_err("<root>", "expected an object"))?;
    let b1 = obj
        .get("b1")
        .ok_or_else(|| field_err("b1", "missing"))?
        .as_u64()
        .ok_or_else(|| field_err("b1", "expected a nonnegative integer"))?;
    let form = obj.get("form").ok_or_else(|| field_err("form", "missing"))?;
    Ok(ManifoldDescriptor::new(b1, gram_from_value(form, "form.")?))
}

pub fn load_manifold(path: &Path) -> Result<ManifoldDescriptor, FormatError> {
    parse_manifold(&read(path)?)
}

pub fn manifold_to_value(m: &ManifoldDescriptor) -> Value {
    serde_json::json!({ "b1": m.b1, "form": gram_to_value(&m.form) })
}

impl Serialize for GramMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        gram_to_value(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GramMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        gram_from_value(&v, "").map_err(D::Error::custom)
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let nums: Vec<Number> = self.0.iter().map(bigint_to_number).collect();
        nums.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let nums = Vec::<Number>::deserialize(d)?;
        nums.iter()
            .map(|n| {
                number_to_bigint(n).ok_or_else(|| D::Error::custom(format!("not an integer: {n}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(LatticeVector)
    }
}

/// `serde(with = ...)` adapter writing a [`BigInt`] as a bare JSON integer.
pub mod bigint_number {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        bigint_to_number(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let n = Number::deserialize(d)?;
        number_to_bigint(&n).ok_or_else(|| D::Error::custom(format!("not an integer: {n}")))
    }
}
