use thiserror::Error;

/// Errors reported by the library.
///
/// Check *violations* (a failed Jacobi identity, a non-isomorphic comparison)
/// are not errors; they are recorded in [`crate::report::Report`] values.
/// Errors are reserved for malformed inputs and broken preconditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid rational literal '{0}'")]
    InvalidRational(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("not a subalgebra: {0}")]
    NotASubalgebra(String),
    #[error("identity violation: {0}")]
    IdentityViolation(String),
    #[error("construction order: {0}")]
    ConstructionOrder(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal consistency: {0}")]
    Inconsistency(String),
}
