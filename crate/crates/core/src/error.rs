use thiserror::Error;

use crate::geometry::Flag;

pub type Result<T, E = GeoError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeoError {
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("{0} is not a flag")]
    NotAFlag(Flag),
    #[error("the type set must not be empty")]
    EmptyTypeSet,
    #[error("more than 64 types are not supported")]
    TooManyTypes,
    #[error("not a geometry: maximal flag {0} is not a chamber")]
    NotAGeometry(Flag),
    #[error("expected rank {expected}, found rank {found}")]
    WrongRank { expected: usize, found: usize },
    #[error("partition is not type-refining: {0}")]
    NotTypeRefining(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("permutation degree {found} does not match {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("group order exceeds the cap of {cap}")]
    GroupOrderExceeded { cap: usize },
    #[error("more than {cap} flags")]
    FlagCountExceeded { cap: usize },
    #[error("generator {index} is not an automorphism: {reason}")]
    NotAutomorphism { index: usize, reason: String },
    #[error("element is not contained in the overgroup")]
    NotInGroup,
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl GeoError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        GeoError::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for the errors produced when a configured size cap is hit.
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            GeoError::GroupOrderExceeded { .. } | GeoError::FlagCountExceeded { .. }
        )
    }
}
