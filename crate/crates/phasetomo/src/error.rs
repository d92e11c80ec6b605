//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong when building or transforming states.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad JSON, non-finite coordinate, invalid weights.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A truncated Fock dimension cannot meet the requested tail bound.
    #[error("dimension {dim} too small for tail {target:.3e} (needs {needed}); increase the dimension")]
    DimensionTooSmall {
        dim: usize,
        needed: usize,
        target: f64,
    },

    /// The truncation policy's `max_dim` would be exceeded.
    #[error("required Fock dimension {needed} exceeds max_dim {max_dim}")]
    MaxDimExceeded { needed: usize, max_dim: usize },

    /// An operator failed the density-state validator.
    #[error("not a density state: {0}")]
    NotDensity(String),

    /// A class-restricted map was applied outside its closed class.
    #[error("out of class: {0}")]
    OutOfClass(String),

    /// A quadrature did not converge; the message carries diagnostics.
    #[error("quadrature failure: {0}")]
    Quadrature(String),

    /// A stated precondition does not hold (e.g. non-orthogonal inputs,
    /// vanishing superposition denominator).
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
