//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("carrier size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("partition is not a congruence: op `{op}` maps class pair ({left_class}, {right_class}) to both class {first} and class {second}")]
    NotACongruence {
        op: String,
        left_class: usize,
        right_class: usize,
        first: usize,
        second: usize,
    },

    #[error("carrier size {n} exceeds the cap {cap} for this operation")]
    CarrierTooLarge { n: usize, cap: usize },

    #[error("monoid closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("tower arity mismatch: spec has {spec_levels} levels but {args} arguments were given")]
    ArityMismatch { spec_levels: usize, args: usize },

    #[error("the given tables do not form a solution (braid relation fails)")]
    NotASolution,

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
