//! Projective sequences of affine subspaces and the solvers built on them.
//!
//! A sequence assigns to every level `n` an affine subspace `X_n` of
//! `V^{A_n}`, bonded by restriction. The chains `f_{nm}(X_m)` shrink as `m`
//! grows; a compatible family of elements taken from the shrunken images is
//! a prefix of an element of the inverse limit. Preimage extraction applies
//! this to the fibers `τ_n^{-1}(y|_{B_n})`. Inverse synthesis solves for the
//! inverse rule directly and certifies it by composition.

mod invert;
mod preimage;
mod sequence;

pub use invert::{
    invert_ca, inverse_memory, kernel_witness, left_inverse, surjectivity_counterexample, InvertOptions, InvertOutcome,
    ReversibilityCertificate, Witness,
};
pub use preimage::{fiber_sequence, kernel_sequence, preimage_extract, PreimageOptions, PreimageOutcome, PreimageReport};
pub use sequence::{
    extract_limit_prefix, lift_element, universal_spaces, ExtractedPrefix, Extraction, LiftRecord, ProjectiveSequence,
    Restriction, UniversalChain, WindowSequence,
};
