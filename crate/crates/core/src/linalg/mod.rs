//! Exact linear and affine algebra over prime fields.
//!
//! Subspaces and affine subspaces are kept in a canonical reduced form so
//! that equality of stored values is equality of sets.

mod field;
mod matrix;
mod subspace;

pub use field::Fp;
pub use matrix::{Matrix, Rref};
pub use subspace::{AffineSubspace, Subspace};
