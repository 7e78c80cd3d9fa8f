//! Restriction to a subgroup containing the memory set, and induction back.
//!
//! Both operations only relabel the memory set through the embedding
//! `H -> G`; the blocks are untouched. Questions about an automaton over
//! `G` (bijectivity, inverse rules, preimages) can therefore be asked over
//! the smaller group `⟨M⟩` and transported back.

use crate::ca::LinearCA;
use crate::error::{Error, Result};
use crate::groups::{subgroup_generated, Subgroup};

/// `τ_H`: the automaton over `H` with memory `recognize(M)` and the same blocks.
pub fn restrict(ca: &LinearCA, h: &Subgroup) -> Result<LinearCA> {
    if ca.group() != h.ambient() {
        return Err(Error::GroupMismatch(format!("CA over {} restricted along a subgroup of {}", ca.group(), h.ambient())));
    }
    let mut blocks = Vec::with_capacity(ca.memory().len());
    for (m, b) in ca.rule().iter() {
        let local = h.recognize(m).ok_or_else(|| Error::NotInSubgroup(m.to_string()))?;
        blocks.push((local, b.clone()));
    }
    LinearCA::from_blocks(h.group().clone(), ca.field(), ca.dim(), blocks)
}

/// `σ^G`: the automaton over the ambient group with memory `embed(M)`.
pub fn induce(ca: &LinearCA, h: &Subgroup) -> Result<LinearCA> {
    if ca.group() != h.group() {
        return Err(Error::GroupMismatch(format!("CA over {} induced along an embedding of {}", ca.group(), h.group())));
    }
    let blocks = ca
        .rule()
        .iter()
        .map(|(m, b)| Ok((h.embed(m)?, b.clone())))
        .collect::<Result<Vec<_>>>()?;
    LinearCA::from_blocks(h.ambient().clone(), ca.field(), ca.dim(), blocks)
}

/// The subgroup generated by the minimal memory set, and the restriction to it.
pub fn reduce_to_memory_subgroup(ca: &LinearCA) -> Result<(Subgroup, LinearCA)> {
    let h = subgroup_generated(ca.group(), &ca.minimal_memory())?;
    let restricted = restrict(ca, &h)?;
    Ok((h, restricted))
}

/// Bijectivity over a finite group, decided by the full-group matrix.
pub fn is_bijective_finite(ca: &LinearCA) -> Result<bool> {
    let m = ca.full_group_matrix()?;
    Ok(m.rows() == m.cols() && m.rank() == m.rows())
}
