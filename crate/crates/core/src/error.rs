use thiserror::Error;

use crate::report::ValidationReport;

/// Malformed input: identifiers that do not resolve, maps that are not
/// total, and similar defects that stop a value from being built at all.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructuralError {
    #[error("invalid identifier {0:?}: only [A-Za-z0-9_] is allowed")]
    BadIdentifier(String),
    #[error("duplicate {what} identifier {id:?}")]
    Duplicate { what: &'static str, id: String },
    #[error("unknown {what} {id:?}")]
    Unknown { what: &'static str, id: String },
    #[error("map of {id:?} is not total: {detail}")]
    NotTotal { id: String, detail: String },
    #[error("map of {id:?} sends {from:?} outside its codomain ({to:?})")]
    BadImage { id: String, from: String, to: String },
    #[error("{0}")]
    Other(String),
}

/// Refusal of an exhaustive search whose input exceeds the configured bound.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("search bound exceeded: {what} is {actual}, limit {limit}")]
pub struct BoundExceeded {
    pub what: &'static str,
    pub actual: usize,
    pub limit: usize,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error(transparent)]
    Bound(#[from] BoundExceeded),
    #[error("invalid input: {0}")]
    Invalid(ValidationReport),
    #[error("groupoid is not connected")]
    Disconnected,
    #[error("mismatched operands: {0}")]
    Mismatch(String),
    #[error("no morphism contains seed: {0}")]
    NoMorphismContainsSeed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_identifier(id: &str) -> Result<(), StructuralError> {
    if !id.is_empty() && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
        Ok(())
    } else {
        Err(StructuralError::BadIdentifier(id.to_string()))
    }
}
