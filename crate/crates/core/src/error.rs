//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong when building states, running protocols or
/// evaluating bounds.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode count must be at least 1")]
    EmptyModes,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized: |norm^2 - 1| = {deviation:.3e} exceeds {tolerance:.1e}")]
    NotNormalized { deviation: f64, tolerance: f64 },

    #[error("matrix is not unitary: max |U^H U - I| entry = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not hermitian: max |A - A^H| entry = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix trace deviates from 1 by {deviation:.3e}")]
    TraceNotOne { deviation: f64 },

    #[error("matrix is not positive semidefinite within tolerance {tolerance:.1e}")]
    NotPositiveSemidefinite { tolerance: f64 },

    #[error("probability {value:.3e} is below the rounding-noise floor")]
    NegativeProbability { value: f64 },

    #[error("modulus must be at least 2, got {0}")]
    BadModulus(usize),

    #[error("player count must be a prime, got {0}")]
    NotPrime(usize),

    #[error("player index {index} out of range for {n_players} players")]
    PlayerOutOfRange { index: usize, n_players: usize },

    #[error("input index {index} out of range for modulus {modulus}")]
    InputOutOfRange { index: usize, modulus: usize },

    #[error("mixing weight must lie in [0, 1], got {0}")]
    WeightOutOfRange(f64),

    #[error("noise win rate must lie in [0, 1), got {0}")]
    NoiseRateOutOfRange(f64),

    #[error("hop budget for {n_players} players sits on a floor boundary; result would not be reliable")]
    HopCountAmbiguous { n_players: usize },

    #[error("{n_players}-player strategy space is too large to handle exhaustively")]
    EnumerationTooLarge { n_players: usize },

    #[error("behavior table entry {value} is not finite, cannot be treated exactly")]
    NotRationalizable { value: f64 },

    #[error("answer vector has {got} entries, expected {expected}")]
    AnswerLengthMismatch { expected: usize, got: usize },

    #[error("relay hop from vertex {from} to vertex {to} skips over the polygon edge")]
    HopNotAdjacent { from: usize, to: usize },

    #[error("relay path visits vertex {vertex} twice")]
    DuplicateVisit { vertex: usize },

    #[error("relay path is longer than the flight budget")]
    PathBudgetExceeded,
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
