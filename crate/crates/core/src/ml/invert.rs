use std::collections::BTreeMap;

use crate::ca::{Configuration, LinearCA, Pattern};
use crate::error::Result;
use crate::groups::{GroupElement, GroupKind, Window};
use crate::linalg::Matrix;

/// Search bounds for [`invert_ca`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvertOptions {
    /// Candidate inverse memory sets are the balls of radius `0..=max_radius`.
    pub max_radius: usize,
    /// Largest period tried by the periodic kernel search on `Z`.
    pub period_bound: usize,
}

impl Default for InvertOptions {
    fn default() -> Self {
        Self { max_radius: 8, period_bound: 8 }
    }
}

/// A two-sided inverse together with both compositions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversibilityCertificate {
    pub ca: LinearCA,
    pub inverse: LinearCA,
    /// Radius of the ball the inverse memory was searched in.
    pub radius: usize,
    /// `ν ∘ τ`.
    pub left: LinearCA,
    /// `τ ∘ ν`.
    pub right: LinearCA,
}

impl ReversibilityCertificate {
    /// Recomputes both compositions and checks that they are the identity.
    pub fn verify(&self) -> Result<bool> {
        let left = self.inverse.compose(&self.ca)?;
        let right = self.ca.compose(&self.inverse)?;
        Ok(left == self.left && right == self.right && left.is_identity() && right.is_identity())
    }
}

/// Evidence that an automaton is not bijective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A nonzero configuration mapped to zero.
    Kernel(Configuration),
    /// A pattern on `B_n` with no preimage on `A_n`; no configuration maps onto it.
    EmptyFiber { source: Window, target: Pattern },
    /// `ν ∘ τ = Id` while `τ ∘ ν ≠ Id`: τ is injective but not surjective.
    LeftInverseOnly { left_inverse: LinearCA },
}

impl Witness {
    /// Independent re-check against `ca`.
    pub fn verify(&self, ca: &LinearCA) -> Result<bool> {
        match self {
            Witness::Kernel(x) => Ok(!x.is_zero() && ca.apply_config(x)?.is_zero()),
            Witness::EmptyFiber { source, target } => {
                let wm = ca.window_map_on(source)?;
                if target.domain() != wm.target {
                    return Ok(false);
                }
                target.check(ca.group(), ca.field())?;
                Ok(!is_consistent(&wm.matrix, &target.to_flat(&wm.target)?))
            }
            Witness::LeftInverseOnly { left_inverse } => {
                Ok(left_inverse.compose(ca)?.is_identity() && !ca.compose(left_inverse)?.is_identity())
            }
        }
    }
}

/// Consistency of `M x = b` by comparing ranks of `M` and `[M | b]`.
fn is_consistent(m: &Matrix, b: &[u32]) -> bool {
    let column = Matrix::new(m.field(), b.len(), 1, b.to_vec()).expect("reduced scalars");
    let aug = m.hstack(&column).expect("same row count");
    aug.rank() == m.rank()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvertOutcome {
    Reversible(ReversibilityCertificate),
    NotInvertible(Witness),
    /// No inverse and no witness up to the search bounds.
    Unknown { max_radius: usize },
}

/// Solves `ν ∘ τ = Id` for `ν` with memory `ball(radius)`.
///
/// Row `r` of all blocks of `ν` is one unknown vector; every row shares the
/// coefficient matrix `K[(g,c),(e,i)] = Σ_{e m = g} B_m[i][c]`.
pub fn left_inverse(ca: &LinearCA, radius: usize) -> Result<Option<LinearCA>> {
    let group = ca.group();
    let d = ca.dim();
    let f = ca.field();
    let candidates = group.ball(radius)?;
    let support: Vec<(GroupElement, &Matrix)> =
        ca.rule().iter().filter(|(_, b)| !b.is_zero()).map(|(m, b)| (m.clone(), b)).collect();
    let mut outputs: BTreeMap<GroupElement, usize> = BTreeMap::new();
    outputs.insert(group.identity(), 0);
    for e in &candidates {
        for (m, _) in &support {
            let next = outputs.len();
            outputs.entry(group.mul(e, m)).or_insert(next);
        }
    }
    let mut k = Matrix::zeros(f, outputs.len() * d, candidates.len() * d);
    for (ei, e) in candidates.iter().enumerate() {
        for (m, b) in &support {
            let gi = outputs[&group.mul(e, m)];
            for c in 0..d {
                for i in 0..d {
                    let v = b.get(i, c);
                    if v != 0 {
                        let (row, col) = (gi * d + c, ei * d + i);
                        k.set(row, col, f.add(k.get(row, col), v));
                    }
                }
            }
        }
    }
    let id_row = outputs[&group.identity()];
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(d);
    for r in 0..d {
        let mut rhs = vec![0u32; outputs.len() * d];
        rhs[id_row * d + r] = 1 % f.p();
        let sol = k.solve(&rhs)?;
        match sol.representative() {
            Some(u) => rows.push(u.to_vec()),
            None => return Ok(None),
        }
    }
    let blocks = candidates.iter().enumerate().map(|(ei, e)| {
        let mut block = Matrix::zeros(f, d, d);
        for (r, u) in rows.iter().enumerate() {
            for i in 0..d {
                block.set(r, i, u[ei * d + i]);
            }
        }
        (e.clone(), block)
    });
    Ok(Some(LinearCA::from_blocks(group.clone(), f, d, blocks)?))
}

/// Searches for an inverse rule, or for a witness that none exists.
///
/// For each radius `n` it first solves for a left inverse with memory
/// `ball(n)`, then looks for kernel and empty-fiber witnesses of size `n`.
/// Every returned verdict is exact; only `Unknown` is inconclusive.
pub fn invert_ca(ca: &LinearCA, options: InvertOptions) -> Result<InvertOutcome> {
    for n in 0..=options.max_radius {
        if let Some(nu) = left_inverse(ca, n)? {
            let right = ca.compose(&nu)?;
            if right.is_identity() {
                let left = nu.compose(ca)?;
                return Ok(InvertOutcome::Reversible(ReversibilityCertificate {
                    ca: ca.clone(),
                    inverse: nu,
                    radius: n,
                    left,
                    right,
                }));
            }
            return Ok(InvertOutcome::NotInvertible(Witness::LeftInverseOnly { left_inverse: nu }));
        }
        let periods = if n == options.max_radius { n + 1..options.period_bound.max(n + 1) + 1 } else { n + 1..n + 2 };
        if let Some(w) = kernel_witness_between(ca, n, periods)? {
            return Ok(InvertOutcome::NotInvertible(Witness::Kernel(w)));
        }
        if let Some((source, target)) = empty_fiber_at(ca, n)? {
            return Ok(InvertOutcome::NotInvertible(Witness::EmptyFiber { source, target }));
        }
    }
    Ok(InvertOutcome::Unknown { max_radius: options.max_radius })
}

/// A nonzero configuration in the kernel: supported in `ball(support_bound)`,
/// or (on `Z`) periodic with period at most `period_bound`.
pub fn kernel_witness(ca: &LinearCA, support_bound: usize, period_bound: usize) -> Result<Option<Configuration>> {
    for n in 0..=support_bound {
        if let Some(w) = kernel_witness_between(ca, n, 1..1)? {
            return Ok(Some(w));
        }
    }
    kernel_witness_between(ca, 0, 1..period_bound + 1)
}

fn kernel_witness_between(
    ca: &LinearCA,
    radius: usize,
    periods: std::ops::Range<usize>,
) -> Result<Option<Configuration>> {
    let domain = ca.group().ball(radius)?;
    let map = ca.support_map(&domain)?;
    if let Some(v) = map.matrix.kernel().basis().first() {
        let x = Pattern::from_flat(&domain, ca.dim(), v)?.to_configuration();
        return Ok(Some(x));
    }
    if matches!(ca.group().kind(), GroupKind::Integers) {
        for q in periods {
            let v = periodic_kernel(ca, q);
            if let Some(v) = v.first() {
                let values = v.chunks(ca.dim()).map(<[u32]>::to_vec).collect();
                return Ok(Some(Configuration::periodic(ca.dim(), values)?));
            }
        }
    }
    Ok(None)
}

/// Kernel basis of the circulant system of `τ` on `q`-periodic configurations of `Z`.
fn periodic_kernel(ca: &LinearCA, q: usize) -> Vec<Vec<u32>> {
    let d = ca.dim();
    let f = ca.field();
    let mut m = Matrix::zeros(f, q * d, q * d);
    for (g, b) in ca.rule().iter() {
        let GroupElement::Int(s) = g else { unreachable!("rule over Z") };
        for k in 0..q {
            let j = (k as i64 + s).rem_euclid(q as i64) as usize;
            for r in 0..d {
                for c in 0..d {
                    let v = b.get(r, c);
                    if v != 0 {
                        let (row, col) = (k * d + r, j * d + c);
                        m.set(row, col, f.add(m.get(row, col), v));
                    }
                }
            }
        }
    }
    m.kernel().basis().to_vec()
}

/// A pattern on `B_n` with no preimage under the window map on `A_n`,
/// searched for `n = 0..=max_radius`.
pub fn surjectivity_counterexample(ca: &LinearCA, max_radius: usize) -> Result<Option<(usize, Pattern)>> {
    for n in 0..=max_radius {
        if let Some((_, target)) = empty_fiber_at(ca, n)? {
            return Ok(Some((n, target)));
        }
    }
    Ok(None)
}

/// The first unit vector outside the column space of `τ_n`.
fn empty_fiber_at(ca: &LinearCA, n: usize) -> Result<Option<(Window, Pattern)>> {
    let wm = ca.window_map(n)?;
    let image = wm.matrix.column_space();
    if image.dim() == wm.matrix.rows() {
        return Ok(None);
    }
    let rows = wm.matrix.rows();
    let missing = (0..rows)
        .find(|&i| !image.contains(&unit(rows, i, ca.field().p())))
        .expect("a proper subspace misses some unit vector");
    let target = Pattern::from_flat(&wm.target, ca.dim(), &unit(rows, missing, ca.field().p()))?;
    Ok(Some((wm.source, target)))
}

fn unit(len: usize, i: usize, p: u32) -> Vec<u32> {
    let mut v = vec![0; len];
    v[i] = 1 % p;
    v
}

/// Minimal memory of the inverse, if `ca` is reversible within the bounds.
pub fn inverse_memory(ca: &LinearCA, options: InvertOptions) -> Result<Option<Vec<GroupElement>>> {
    match invert_ca(ca, options)? {
        InvertOutcome::Reversible(cert) => Ok(Some(cert.inverse.minimal_memory())),
        _ => Ok(None),
    }
}

impl InvertOutcome {
    pub fn certificate(&self) -> Option<&ReversibilityCertificate> {
        match self {
            InvertOutcome::Reversible(c) => Some(c),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            InvertOutcome::NotInvertible(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_reversible(&self) -> bool {
        matches!(self, InvertOutcome::Reversible(_))
    }
}
