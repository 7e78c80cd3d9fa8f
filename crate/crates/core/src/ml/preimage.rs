use crate::ca::{Configuration, LinearCA, Pattern};
use crate::error::{Error, Result};
use crate::groups::Window;

use super::invert::Witness;
use super::sequence::{extract_limit_prefix, ExtractedPrefix, Extraction, ProjectiveSequence, WindowSequence};

/// Bounds for [`preimage_extract`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreimageOptions {
    /// Level `N` of the returned prefix (a pattern on `A_N`).
    pub window: usize,
    /// Deepest level of the projective sequence consulted.
    pub cutoff: usize,
    pub plateau_k: usize,
}

impl Default for PreimageOptions {
    fn default() -> Self {
        Self { window: 6, cutoff: 14, plateau_k: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimageReport {
    /// `x'_N` on `A_N`; its image agrees with `y` on `B_N`.
    pub pattern: Pattern,
    pub extraction: ExtractedPrefix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PreimageOutcome {
    Found(PreimageReport),
    /// `y|_{B_n}` has no preimage on `A_n`; carries a [`Witness::EmptyFiber`].
    NotInImage(Witness),
    /// A chain at `level` did not plateau by the cutoff.
    Unknown { level: usize },
}

/// The fiber sequence `X_n = τ_n^{-1}(y|_{B_n})` of `ca` over its ball sequence.
pub fn fiber_sequence<'a>(ca: &'a LinearCA, y: &'a Configuration) -> Result<WindowSequence<'a>> {
    if y.dim() != ca.dim() {
        return Err(Error::DimensionMismatch(format!("target dim {} vs {}", y.dim(), ca.dim())));
    }
    y.check(ca.group(), ca.field())?;
    Ok(WindowSequence::new(ca.ball_sequence()?, ca.field(), ca.dim(), move |_, window| {
        let wm = ca.window_map_on(window)?;
        let rhs = y.restrict(&wm.target)?.to_flat(&wm.target)?;
        wm.matrix.solve(&rhs)
    }))
}

/// The kernel sequence `X_n = Ker τ_n`; its chains are the classical
/// diagnostic for injectivity-type questions.
pub fn kernel_sequence(ca: &LinearCA) -> Result<WindowSequence<'_>> {
    Ok(WindowSequence::new(ca.ball_sequence()?, ca.field(), ca.dim(), move |_, window| {
        Ok(crate::linalg::AffineSubspace::from_subspace(ca.window_map_on(window)?.matrix.kernel()))
    }))
}

/// Extracts a pattern `x'` on `A_N` with `τ(x')|_{B_N} = y|_{B_N}` from the
/// inverse limit of the fiber sequence.
pub fn preimage_extract(ca: &LinearCA, y: &Configuration, options: PreimageOptions) -> Result<PreimageOutcome> {
    let seq = fiber_sequence(ca, y)?;
    match extract_limit_prefix(&seq, options.window, options.cutoff, options.plateau_k)? {
        Extraction::Empty { level } => {
            let source: Window = seq.window(level)?;
            let target_window = ca.group().interior(&source, ca.memory())?;
            let target = y.restrict(&target_window)?;
            Ok(PreimageOutcome::NotInImage(Witness::EmptyFiber { source, target }))
        }
        Extraction::Cutoff { level } => Ok(PreimageOutcome::Unknown { level }),
        Extraction::Prefix(extraction) => {
            let window = seq.window(options.window)?;
            let pattern = Pattern::from_flat(&window, ca.dim(), extraction.top())?;
            let wm = ca.window_map_on(&window)?;
            let image = wm.matrix.apply(extraction.top())?;
            if image != y.restrict(&wm.target)?.to_flat(&wm.target)? {
                return Err(Error::InvalidArgument("extracted prefix does not reproduce the target".into()));
            }
            Ok(PreimageOutcome::Found(PreimageReport { pattern, extraction }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GroupDescriptor, GroupElement};
    use crate::linalg::{Fp, Matrix};
    use crate::ml::universal_spaces;

    fn int(k: i64) -> GroupElement {
        GroupElement::Int(k)
    }

    fn scalar_rule(p: u64, coeffs: &[(i64, i64)]) -> LinearCA {
        let f = Fp::new(p).unwrap();
        LinearCA::from_blocks(
            GroupDescriptor::integers(),
            f,
            1,
            coeffs.iter().map(|&(m, c)| (int(m), Matrix::from_rows(f, &[vec![c]]).unwrap())),
        )
        .unwrap()
    }

    fn found(out: PreimageOutcome) -> PreimageReport {
        match out {
            PreimageOutcome::Found(r) => r,
            other => panic!("expected a prefix, got {other:?}"),
        }
    }

    #[test]
    fn identity_returns_the_target() {
        let id = LinearCA::identity(GroupDescriptor::integers(), Fp::new(3).unwrap(), 1);
        let y = Configuration::finite(1, [(int(-1), vec![2]), (int(2), vec![1])]).unwrap();
        let opts = PreimageOptions { window: 3, cutoff: 6, plateau_k: 2 };
        let r = found(preimage_extract(&id, &y, opts).unwrap());
        assert_eq!(r.pattern, y.restrict(&r.pattern.domain()).unwrap());
    }

    #[test]
    fn shift_preimage_of_delta_is_shifted_delta() {
        let s = scalar_rule(2, &[(1, 1)]);
        let y = Configuration::delta(1, int(0), vec![1]).unwrap();
        let r = found(preimage_extract(&s, &y, PreimageOptions::default()).unwrap());
        let expected = Configuration::delta(1, int(1), vec![1]).unwrap();
        // τ(x)(n) = x(n+1) pins x on every cell but the leftmost, which is free and canonically zero
        assert_eq!(r.pattern, expected.restrict(&r.pattern.domain()).unwrap());
    }

    #[test]
    fn sum_rule_preimage_of_delta_is_a_step() {
        let t = scalar_rule(2, &[(0, 1), (1, 1)]);
        let y = Configuration::delta(1, int(0), vec![1]).unwrap();
        let r = found(preimage_extract(&t, &y, PreimageOptions::default()).unwrap());
        let values: Vec<u32> = r.pattern.iter().map(|(_, v)| v[0]).collect();
        // x(n) + x(n+1) = δ_0(n): x constant on n <= 0 and on n >= 1, with a jump between
        let jump: Vec<usize> = values.windows(2).enumerate().filter(|(_, w)| w[0] != w[1]).map(|(i, _)| i).collect();
        assert_eq!(jump.len(), 1);
        assert_eq!(r.pattern.domain().as_slice()[jump[0]], int(0));
        for rec in &r.extraction.lifts {
            assert!(rec.check(&fiber_sequence(&t, &y).unwrap()).unwrap());
        }
        for chain in &r.extraction.chains {
            assert!(chain.is_non_increasing());
        }
    }

    #[test]
    fn non_surjective_target_is_certified() {
        let f = Fp::new(2).unwrap();
        let proj = Matrix::from_rows(f, &[vec![1, 0], vec![0, 0]]).unwrap();
        let ca = LinearCA::from_blocks(GroupDescriptor::integers(), f, 2, [(int(0), proj)]).unwrap();
        let y = Configuration::delta(2, int(0), vec![0, 1]).unwrap();
        let PreimageOutcome::NotInImage(w) = preimage_extract(&ca, &y, PreimageOptions::default()).unwrap() else {
            panic!()
        };
        assert!(w.verify(&ca).unwrap());
    }

    #[test]
    fn kernel_chain_of_sum_rule_keeps_constants() {
        let t = scalar_rule(2, &[(0, 1), (1, 1)]);
        let seq = kernel_sequence(&t).unwrap();
        let chain = universal_spaces(&seq, 0, 8, 2).unwrap();
        assert_eq!(chain.plateau, Some(0));
        assert_eq!(chain.last().dim(), Some(1));
        let window = seq.window(0).unwrap();
        assert!(chain.last().contains(&vec![1; window.len()]));
    }

    #[test]
    fn kernel_chain_of_sigma2_vanishes() {
        let f = Fp::new(2).unwrap();
        let n = Matrix::from_rows(f, &[vec![0, 1], vec![0, 0]]).unwrap();
        let sigma = LinearCA::from_blocks(GroupDescriptor::integers(), f, 2, [(int(0), Matrix::identity(f, 2)), (int(1), n)])
            .unwrap();
        let seq = kernel_sequence(&sigma).unwrap();
        let chain = universal_spaces(&seq, 0, 4, 2).unwrap();
        assert!(chain.is_non_increasing());
        assert_eq!(chain.last().dim(), Some(0));
        assert!(chain.plateau.is_some());
    }
}
