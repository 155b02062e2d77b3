use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rank {0}: free groups are supported for 1 <= k <= 26")]
    InvalidRank(usize),
    #[error("character {ch:?} is not a letter of F_{rank}")]
    BadLetter { ch: char, rank: usize },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("the identity has no {0}")]
    Identity(&'static str),
    #[error("infinite index: {0}")]
    InfiniteIndex(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("resource cap exceeded: {0} (raise COMMSOL_MAX_WORK to allow more)")]
    ResourceCap(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("matrix is singular")]
    Singular,
    #[error("not an isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("not a pro-automorphism at this depth: {0}")]
    NotProAutomorphism(String),
    #[error("selection is not cofinal: {0}")]
    NotCofinal(String),
    #[error("no lift: {0}")]
    NoLift(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
