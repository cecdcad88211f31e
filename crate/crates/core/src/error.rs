use num_bigint::BigInt;
use thiserror::Error;

use crate::spectral::PowerEstimate;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid recurrence spec: {0}")]
    InvalidSpec(String),

    #[error("no closed-form sum is available for sequence `{0}`")]
    UnsupportedSequence(String),

    #[error("length must be at least 1")]
    ZeroLength,

    #[error("circulant first row must not be empty")]
    EmptyMatrix,

    #[error("entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: BigInt },

    #[error("dimension mismatch: expected length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("precision loss: {what} at index {index} does not fit below 2^{limit_bits}")]
    PrecisionLoss {
        what: &'static str,
        index: usize,
        limit_bits: u32,
    },

    #[error("power iteration did not converge after {} iterations (estimate {})", .0.iterations, .0.value)]
    NoConvergence(PowerEstimate),
}
