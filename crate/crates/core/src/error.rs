use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("position {pos} outside 1..={len}")]
    PositionOutOfRange { pos: usize, len: usize },

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("unknown block: {0}")]
    UnknownBlock(String),

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("member {word} has length {len}, expected {dim}")]
    WrongMemberLength { word: String, len: usize, dim: usize },

    #[error("duplicate member {0}")]
    DuplicateMember(String),

    #[error("dimension mismatch: set has dimension {set}, requested {requested}")]
    DimensionMismatch { set: usize, requested: usize },

    #[error("dimension {dim} exceeds the limit {limit} (a {dim}-cube bitmap needs {bytes} bytes)")]
    DimensionOverLimit { dim: usize, limit: usize, bytes: u64 },

    #[error("{what}({n}) is infeasible here: supported up to {max}")]
    SearchInfeasible { what: &'static str, n: usize, max: usize },

    #[error("refusing to materialise: {0}")]
    TooLarge(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("invalid m-decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("s-blocks overlap the determined coordinates: {0}")]
    AdmissibleOverlap(String),

    #[error("selection is not admissible: {0}")]
    NotAdmissible(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}
