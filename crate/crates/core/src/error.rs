use thiserror::Error;

use crate::sets::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("enumeration cap of {cap} items exceeded")]
    CapExceeded { cap: u64 },
    #[error("instance has no `{0}` field, which this operation needs")]
    MissingField(&'static str),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("set function is not intersecting supermodular on {x:?} and {y:?}")]
    NotIntersectingSupermodular { x: VertexSet, y: VertexSet },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("g-polymatroid invariant fails: {0}")]
    GPolyInvariant(String),
    #[error("empty summand in a Minkowski sum")]
    EmptySummand,
    #[error("malformed packing: {0}")]
    MalformedPacking(String),
    #[error("could not parse input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
