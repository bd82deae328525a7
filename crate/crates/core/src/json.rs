//! Serde helpers for exact integers and integer matrices.
//!
//! Integers are written as JSON numbers when they fit in an `i64` and as decimal strings
//! otherwise; both forms are accepted on input.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::zmod::IntMatrix;
use crate::{Error, Result};

/// An exact integer as it appears in documents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct JsonIntVisitor;

impl<'de> Visitor<'de> for JsonIntVisitor {
    type Value = JsonInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonInt, E> {
        Ok(JsonInt(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonInt, E> {
        Ok(JsonInt(v.into()))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<JsonInt, E> {
        Err(E::custom(format!("non-integer number {v}")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonInt, E> {
        BigInt::from_str(v.trim())
            .map(JsonInt)
            .map_err(|_| E::custom(format!("not an integer: {v:?}")))
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(JsonIntVisitor)
    }
}

/// Row-major nested integers; the shape is checked against context when converted.
pub type RawMatrix = Vec<Vec<JsonInt>>;

pub fn matrix_to_raw(m: &IntMatrix) -> RawMatrix {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(JsonInt).collect())
        .collect()
}

/// Converts a raw matrix, requiring shape `rows x cols`. An empty array stands for the zero
/// matrix of any shape with a zero dimension.
pub fn raw_to_matrix(raw: &RawMatrix, rows: usize, cols: usize, location: &str) -> Result<IntMatrix> {
    if raw.is_empty() && (rows == 0 || cols == 0) {
        return Ok(IntMatrix::zeros(rows, cols));
    }
    if raw.len() != rows {
        return Err(Error::invalid(
            location,
            format!("expected {rows} rows, found {}", raw.len()),
        ));
    }
    let mut m = IntMatrix::zeros(rows, cols);
    for (i, row) in raw.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::invalid(
                location,
                format!("row {i} has {} entries, expected {cols}", row.len()),
            ));
        }
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = v.0.clone();
        }
    }
    Ok(m)
}

/// `#[serde(with = "crate::json::bigint_vec")]` for `Vec<BigInt>` fields.
pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        let wrapped: Vec<JsonInt> = v.iter().cloned().map(JsonInt).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
        let wrapped: Vec<JsonInt> = Vec::deserialize(d)?;
        Ok(wrapped.into_iter().map(|x| x.0).collect())
    }
}

/// `#[serde(with = "crate::json::matrix")]` for `IntMatrix` fields (shape taken from the rows;
/// matrices with no rows lose their column count).
pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &IntMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_to_raw(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<IntMatrix, D::Error> {
        let raw: RawMatrix = Vec::deserialize(d)?;
        let cols = raw.first().map_or(0, |r| r.len());
        raw_to_matrix(&raw, raw.len(), cols, "matrix").map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_round_trip_in_both_forms() {
        let small: JsonInt = serde_json::from_str("-7").unwrap();
        assert_eq!(small.0, BigInt::from(-7));
        let big: JsonInt = serde_json::from_str("\"123456789012345678901234567890\"").unwrap();
        let text = serde_json::to_string(&big).unwrap();
        assert_eq!(text, "\"123456789012345678901234567890\"");
        assert_eq!(serde_json::to_string(&small).unwrap(), "-7");
        assert!(serde_json::from_str::<JsonInt>("1.5").is_err());
    }

    #[test]
    fn matrix_shape_is_checked() {
        let raw: RawMatrix = serde_json::from_str("[[1,2],[3]]").unwrap();
        assert!(raw_to_matrix(&raw, 2, 2, "d.1").is_err());
        let empty: RawMatrix = Vec::new();
        assert_eq!(raw_to_matrix(&empty, 0, 3, "x").unwrap().shape(), (0, 3));
    }
}
