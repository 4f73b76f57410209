//! Error type shared by all modules.

/// Failure modes surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Operand dimensions are incompatible.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// A parameter is outside its documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A run configuration is inconsistent (grids, steps, schedules).
    #[error("configuration error: {0}")]
    Config(String),
    /// A computed quantity violated an invariant it must satisfy
    /// (trace drift, non-Hermitian generator, inconsistent closed form).
    #[error("numerical invariant violated: {0}")]
    NumericalInvariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
