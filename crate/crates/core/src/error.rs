//! Shared error type. Operations that answer a yes/no question return report
//! structs instead; `Error` is reserved for violated preconditions and I/O.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("modulus is reducible over GF({p})")]
    ReducibleModulus { p: u64 },

    #[error("polynomial has the wrong degree: expected {expected}, got {got}")]
    WrongDegree { expected: usize, got: usize },

    #[error("no primitive element found (searched the whole multiplicative group)")]
    NoPrimitiveFound,

    #[error("candidate is not a perfect difference set: {reason}")]
    NotAPds { reason: String },

    #[error("{m} is not a multiplier of the set")]
    NotAMultiplier { m: u64 },

    #[error("sets are not related by any unit multiple and shift")]
    NotRelated,

    #[error("set is not fixed by multiplication by q = {q}")]
    NotFixedByQ { q: u64 },

    #[error("exhaustive search is only supported for q <= 3, got q = {0}")]
    TooLarge(u64),

    #[error("unit {c} does not give a correlation here: {reason}")]
    InvalidCorrelation { c: u64, reason: String },

    #[error("triangle presentation is not invariant under i -> q*i")]
    NotSInvariant,

    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),

    #[error("unsupported export format {0:?}")]
    UnsupportedFormat(String),

    #[error("image of point {point} is not a line of the plane")]
    NotALine { point: u64 },

    #[error("reference table row mismatch for q = {q}: {reason}")]
    RowMismatch { q: u64, reason: String },

    #[error("malformed input: {0}")]
    BadInput(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
