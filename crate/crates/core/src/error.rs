use thiserror::Error;

use crate::ensembles::GroupId;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("angle {angle} outside the kernel interval [{lo}, {hi}]")]
    AngleOutOfInterval { angle: f64, lo: f64, hi: f64 },

    #[error("basis index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("unknown group identifier `{0}`")]
    UnknownGroup(String),

    #[error("no strategy named `{name}` in the {kind} registry (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("rejection sampler gave up on point {point} of {rank} after {attempts} proposals (replicate {replicate:?})")]
    SamplingFailure {
        point: usize,
        rank: usize,
        attempts: u64,
        replicate: Option<u64>,
    },

    #[error("Haar matrix sampling is not supported for group {0}")]
    UnsupportedGroup(GroupId),

    #[error("requested tolerance {requested:e} not reachable; best bound {achieved:e}")]
    Truncation { requested: f64, achieved: f64 },

    #[error("empty spectral measure")]
    EmptyMeasure,

    #[error("no closed form for argument pattern {0:?}")]
    Pattern(Vec<i64>),

    #[error("Π arity {0} not supported (1..=4)")]
    Arity(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
