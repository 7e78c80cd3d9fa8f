//! The two automata over `Z` whose alphabet is the infinite-dimensional
//! space `V` spanned by `v_1, v_2, ...`.
//!
//! The basis is cut into blocks `E_j = span(v_i : (j-1)j/2 < i <= j(j+1)/2)`.
//! `Φ` lowers the index inside each block and kills the first vector of the
//! block, so it is nilpotent of degree `j` on `E_j`; `ψ` raises every index.
//!
//! * `σ(x)(n) = x(n) - Φ(x(n+1))` is bijective, but its inverse needs a
//!   lookahead of `j - 1` cells on block `j`, so no finite memory serves
//!   every block.
//! * `σ'(x)(n) = x(n+1) - ψ(x(n))` has an image that is not closed: the
//!   constant `v_1` is a limit of images, yet any preimage would need
//!   infinitely many nonzero coordinates.

mod sigma;
mod sigma_prime;
mod sparse;

pub use sigma::{
    phi_matrix, sigma_apply, sigma_block_ca, sigma_block_inverse_ca, sigma_inverse_apply, sigma_inverse_truncation,
    sigma_nonreversibility_witness, sigma_truncation, SigmaWitness,
};
pub use sigma_prime::{
    sigma_prime_apply, sigma_prime_closure_witness, sigma_prime_forced_support, ClosureWitness, ForcedSupport,
};
pub use sparse::{block_end, block_of, block_start, LazySparseConfig, SparseVector, Tail};
