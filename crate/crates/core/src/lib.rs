//! Exact-arithmetic constructions for Z-graded Lie superalgebras.
//!
//! Everything is computed over the rationals with arbitrary precision, so
//! every dimension, kernel and structure constant in a report is exact.
//! The main entry points are:
//!
//! - [`linalg`]: rational matrices, row reduction, kernels and subspace calculus;
//! - [`graded`]: finite-window graded vector spaces, vectors and maps;
//! - [`superalgebra`]: graded Lie superalgebras given by structure constants,
//!   free superalgebras, extensions of local parts, ideals and quotients;
//! - [`kantor`]: the universal superalgebra of a vector space, prolongations
//!   and the algebras generated by a degree-(-1) subspace;
//! - [`lie_leibniz`]: embedding tensors, the induced Leibniz algebra and the
//!   graded superalgebra canonically attached to a Lie-Leibniz triple;
//! - [`report`]: deterministic, serializable outcome records.

pub mod error;
pub mod graded;
pub mod kantor;
pub mod lie_leibniz;
pub mod linalg;
pub mod report;
pub mod superalgebra;

pub use error::Error;
pub use linalg::{Matrix, Scalar, Subspace};

/// Convenience result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
