//! Exact scalars, sparse vectors and canonical subspaces.
//!
//! Every subspace is kept in reduced row echelon form, so subspace equality
//! is structural equality and every set-theoretic question (sum,
//! intersection, membership, quotient dimension) reduces to elimination.

mod field;
mod matrix;
mod sparse;
mod subspace;

pub use field::{Field, Scalar};
pub use matrix::{kernel, kernel_of_images, rref, solve_in_span, Matrix, Rref};
pub use sparse::{EchelonBuilder, SparseVec};
pub use subspace::Subspace;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("mixed fields: expected {0}, found {1}")]
    MixedFields(Field, Field),
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("subspace is not contained in the given space")]
    NotContained,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
}
