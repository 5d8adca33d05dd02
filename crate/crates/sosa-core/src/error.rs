//! Error type shared by every stage of the optimizer.

use alloc::string::String;
use thiserror::Error;

/// Errors surfaced by domain handling, design generation, surrogate
/// fitting and the optimizer loop.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point lies outside the hypercube it is evaluated or normalized on.
    #[error("coordinate {index} = {value} outside [{lower}, {upper}]")]
    DomainViolation {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    /// A configuration value is inconsistent (unknown name, bad bounds, ...).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The experimental design never reached full column rank.
    #[error("design generation failed: [1|X] rank-deficient after {retries} retries")]
    DesignFailure { retries: usize },

    /// The polynomial block [1|X] of the RBF system is rank-deficient;
    /// the caller must add points before refitting.
    #[error("surrogate polynomial block is rank-deficient (n = {n}, d = {d})")]
    SurrogateRank { n: usize, d: usize },

    /// Observed function values contain NaN or infinities.
    #[error("non-finite objective value at history index {index}")]
    NonFiniteData { index: usize },

    /// A numeric input that must be finite is not.
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    /// The augmented RBF system stayed singular through the ridge schedule.
    #[error("RBF system singular even with ridge {ridge}")]
    SingularSystem { ridge: f64 },
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
