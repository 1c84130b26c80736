//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by constructors, solvers, samplers, and verifiers.
#[derive(Debug, Error)]
pub enum Error {
    /// Input lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A bracketed solve was requested on an interval without a sign change.
    #[error("bracketing error: {0}")]
    Bracket(String),

    /// A root search converged to nothing usable or found no real root.
    #[error("root search failed: {0}")]
    Root(String),

    /// Evaluation hit a singular point or a degenerate linear system.
    #[error("singular: {0}")]
    Singular(String),

    /// A finite-difference stencil touched an invalid point.
    #[error("stencil error: {0}")]
    Stencil(String),

    /// Velocity magnitude vanished where a direction was required.
    #[error("stagnation point: zero velocity")]
    Stagnation,

    /// A computation produced a non-finite value.
    #[error("non-finite value in {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
