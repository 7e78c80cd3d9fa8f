//! Linear cellular automata over finitely generated groups with alphabets
//! that are finite-dimensional vector spaces over a prime field.
//!
//! The crate provides exact evaluation, composition and window maps
//! ([`ca`]), restriction and induction between a group and a subgroup
//! ([`transfer`]), inverse-rule synthesis and preimage extraction through
//! projective sequences of affine subspaces ([`ml`]), executable forms of
//! the infinite-dimensional counterexamples ([`counterexamples`]) and the
//! JSON formats and certificate checker used by the command-line tool
//! ([`format`]).

pub mod ca;
pub mod counterexamples;
pub mod error;
pub mod format;
pub mod groups;
pub mod linalg;
pub mod ml;
pub mod transfer;

pub use ca::{Configuration, LinearCA, LocalRule, Pattern, WindowMap};
pub use error::{Error, Result};
pub use groups::{BallSequence, GroupDescriptor, GroupElement, Subgroup, Window};
pub use linalg::{AffineSubspace, Fp, Matrix, Subspace};
