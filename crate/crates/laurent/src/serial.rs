//! Serialization of expansions as records with exact `"p/q"` strings.
//!
//! The record layout is
//! `{h, k, coeffs: ["p/q", …], pivotal, bound?: {delta, G, eps_max}}`,
//! and parsing re-validates every invariant, so a serialize/parse round trip
//! is the identity.

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bound::RemainderBound;
use crate::error::ExpansionError;
use crate::expansion::LaurentExpansion;
use crate::rational::{format_rational, parse_rational};

/// Serialized form of a [`RemainderBound`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    /// Exponent gap `δ`.
    pub delta: String,
    /// Bound constant.
    #[serde(rename = "G")]
    pub g: String,
    /// Validity range.
    pub eps_max: String,
}

/// Serialized form of an expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionRecord {
    /// Lowest retained power.
    pub h: i64,
    /// Highest retained power; must equal `h + coeffs.len() − 1`.
    pub k: i64,
    /// Coefficients as rational strings.
    pub coeffs: Vec<String>,
    /// Pivotality flag.
    pub pivotal: bool,
    /// Optional remainder certificate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundRecord>,
}

impl From<&RemainderBound> for BoundRecord {
    fn from(bound: &RemainderBound) -> Self {
        Self {
            delta: format_rational(bound.delta()),
            g: format_rational(bound.g()),
            eps_max: format_rational(bound.eps_max()),
        }
    }
}

impl TryFrom<&BoundRecord> for RemainderBound {
    type Error = ExpansionError;

    fn try_from(record: &BoundRecord) -> Result<Self, Self::Error> {
        let field = |name: &str, text: &str| {
            parse_rational(text).map_err(|e| ExpansionError::InvalidBound(format!("{name}: {e}")))
        };
        RemainderBound::new(field("delta", &record.delta)?, field("G", &record.g)?, field("eps_max", &record.eps_max)?)
    }
}

impl From<&LaurentExpansion<BigRational>> for ExpansionRecord {
    fn from(e: &LaurentExpansion<BigRational>) -> Self {
        Self {
            h: e.h(),
            k: e.k(),
            coeffs: e.coeffs().iter().map(format_rational).collect(),
            pivotal: e.is_pivotal(),
            bound: e.bound().map(BoundRecord::from),
        }
    }
}

/// Error converting a record back into an expansion.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecordError {
    /// A coefficient string is not a rational.
    #[error("coefficient {index}: {message}")]
    BadCoefficient {
        /// Position in the coefficient list.
        index: usize,
        /// Parser message.
        message: String,
    },
    /// `k` does not match the coefficient count.
    #[error("k = {k} does not match h = {h} with {len} coefficients")]
    WindowMismatch {
        /// Declared lowest power.
        h: i64,
        /// Declared highest power.
        k: i64,
        /// Number of coefficients supplied.
        len: usize,
    },
    /// The expansion itself is invalid.
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
}

impl TryFrom<&ExpansionRecord> for LaurentExpansion<BigRational> {
    type Error = RecordError;

    fn try_from(record: &ExpansionRecord) -> Result<Self, Self::Error> {
        let coeffs = record
            .coeffs
            .iter()
            .enumerate()
            .map(|(index, text)| {
                parse_rational(text).map_err(|e| RecordError::BadCoefficient { index, message: e.to_string() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if record.k != record.h + coeffs.len() as i64 - 1 {
            return Err(RecordError::WindowMismatch { h: record.h, k: record.k, len: coeffs.len() });
        }
        let bound = record.bound.as_ref().map(RemainderBound::try_from).transpose()?;
        Ok(LaurentExpansion::new(record.h, coeffs, record.pivotal, bound)?)
    }
}

impl Serialize for LaurentExpansion<BigRational> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ExpansionRecord::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentExpansion<BigRational> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let record = ExpansionRecord::deserialize(deserializer)?;
        LaurentExpansion::try_from(&record).map_err(serde::de::Error::custom)
    }
}
