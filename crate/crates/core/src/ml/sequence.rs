use std::cell::RefCell;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groups::{BallSequence, Window};
use crate::linalg::{AffineSubspace, Fp, Matrix, Subspace};

/// Coordinate restriction `V^{A_m} -> V^{A_n}` for windows `A_n ⊆ A_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    source_len: usize,
    coords: Vec<usize>,
}

impl Restriction {
    pub fn between(source: &Window, target: &Window, dim: usize) -> Result<Self> {
        let mut coords = Vec::with_capacity(target.len() * dim);
        for g in target {
            let i = source
                .index_of(g)
                .ok_or_else(|| Error::InvalidArgument(format!("{g} lies outside the source window")))?;
            coords.extend((i * dim)..(i + 1) * dim);
        }
        Ok(Self { source_len: source.len() * dim, coords })
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn target_len(&self) -> usize {
        self.coords.len()
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        self.coords.iter().map(|&c| v[c]).collect()
    }

    pub fn matrix(&self, field: Fp) -> Matrix {
        let mut m = Matrix::zeros(field, self.coords.len(), self.source_len);
        for (r, &c) in self.coords.iter().enumerate() {
            m.set(r, c, 1 % field.p());
        }
        m
    }

    pub fn image(&self, a: &AffineSubspace) -> Result<AffineSubspace> {
        match a.parts() {
            None => Ok(AffineSubspace::empty(a.field(), self.coords.len())),
            Some((point, dirs)) => {
                let projected = dirs.basis().iter().map(|v| self.apply(v)).collect();
                AffineSubspace::new(self.apply(point), Subspace::span(a.field(), self.coords.len(), projected)?)
            }
        }
    }

    /// `{ y ∈ a : restrict(y) = x }`.
    pub fn fiber(&self, a: &AffineSubspace, x: &[u32]) -> Result<AffineSubspace> {
        let field = a.field();
        let Some((point, dirs)) = a.parts() else {
            return Ok(AffineSubspace::empty(field, self.source_len));
        };
        // y = point + Σ c_k d_k; solve restrict(Σ c_k d_k) = x - restrict(point)
        let k = dirs.dim();
        let mut system = Matrix::zeros(field, self.coords.len(), k);
        for (col, d) in dirs.basis().iter().enumerate() {
            for (row, &c) in self.coords.iter().enumerate() {
                system.set(row, col, d[c]);
            }
        }
        let base = self.apply(point);
        let rhs: Vec<u32> = x.iter().zip(&base).map(|(&a, &b)| field.sub(a, b)).collect();
        let coeffs = system.solve(&rhs)?;
        let Some((c0, cdirs)) = coeffs.parts() else {
            return Ok(AffineSubspace::empty(field, self.source_len));
        };
        let combine = |c: &[u32], with_point: bool| {
            let mut y = if with_point { point.to_vec() } else { vec![0; self.source_len] };
            for (&ck, d) in c.iter().zip(dirs.basis()) {
                if ck != 0 {
                    for (yi, &di) in y.iter_mut().zip(d) {
                        *yi = field.mul_add(*yi, ck, di);
                    }
                }
            }
            y
        };
        let directions = cdirs.basis().iter().map(|c| combine(c, false)).collect();
        AffineSubspace::new(combine(c0, true), Subspace::span(field, self.source_len, directions)?)
    }
}

/// A projective sequence of affine subspaces `X_n ⊆ V^{A_n}` whose bonding
/// maps are restrictions between nested windows.
pub trait ProjectiveSequence {
    fn field(&self) -> Fp;

    /// Coordinates per window cell.
    fn cell_dim(&self) -> usize;

    fn window(&self, n: usize) -> Result<Window>;

    fn level(&self, n: usize) -> Result<AffineSubspace>;

    /// `f_{nm}` for `m >= n`.
    fn bonding(&self, n: usize, m: usize) -> Result<Restriction> {
        if m < n {
            return Err(Error::InvalidArgument(format!("bonding map f_{{{n},{m}}} needs m >= n")));
        }
        Restriction::between(&self.window(m)?, &self.window(n)?, self.cell_dim())
    }
}

type LevelFn<'a> = dyn Fn(usize, &Window) -> Result<AffineSubspace> + 'a;

/// Levels over the balls of a [`BallSequence`], generated on demand and cached.
pub struct WindowSequence<'a> {
    balls: BallSequence,
    field: Fp,
    dim: usize,
    generator: Box<LevelFn<'a>>,
    windows: RefCell<HashMap<usize, Window>>,
    levels: RefCell<HashMap<usize, AffineSubspace>>,
}

impl<'a> WindowSequence<'a> {
    pub fn new<F>(balls: BallSequence, field: Fp, dim: usize, generator: F) -> Self
    where
        F: Fn(usize, &Window) -> Result<AffineSubspace> + 'a,
    {
        Self {
            balls,
            field,
            dim,
            generator: Box::new(generator),
            windows: RefCell::new(HashMap::new()),
            levels: RefCell::new(HashMap::new()),
        }
    }

    pub fn balls(&self) -> &BallSequence {
        &self.balls
    }
}

impl ProjectiveSequence for WindowSequence<'_> {
    fn field(&self) -> Fp {
        self.field
    }

    fn cell_dim(&self) -> usize {
        self.dim
    }

    fn window(&self, n: usize) -> Result<Window> {
        if let Some(w) = self.windows.borrow().get(&n) {
            return Ok(w.clone());
        }
        let w = self.balls.level(n)?;
        self.windows.borrow_mut().insert(n, w.clone());
        Ok(w)
    }

    fn level(&self, n: usize) -> Result<AffineSubspace> {
        if let Some(x) = self.levels.borrow().get(&n) {
            return Ok(x.clone());
        }
        let window = self.window(n)?;
        let x = (self.generator)(n, &window)?;
        if x.ambient() != window.len() * self.dim {
            return Err(Error::DimensionMismatch(format!(
                "level {n} lives in dimension {}, window needs {}",
                x.ambient(),
                window.len() * self.dim
            )));
        }
        self.levels.borrow_mut().insert(n, x.clone());
        Ok(x)
    }
}

/// The images `f_{nm}(X_m)` for `m = n ..= cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalChain {
    pub n: usize,
    /// `images[k] = f_{n,n+k}(X_{n+k})`.
    pub images: Vec<AffineSubspace>,
    /// First `m` from which `plateau_k` consecutive images coincide.
    pub plateau: Option<usize>,
}

impl UniversalChain {
    pub fn cutoff(&self) -> usize {
        self.n + self.images.len() - 1
    }

    pub fn image_at(&self, m: usize) -> Option<&AffineSubspace> {
        m.checked_sub(self.n).and_then(|k| self.images.get(k))
    }

    /// The most refined image computed, `f_{n,cutoff}(X_cutoff)`.
    pub fn last(&self) -> &AffineSubspace {
        self.images.last().expect("chains are nonempty")
    }

    /// Dimensions along the chain; `None` marks an empty image.
    pub fn dims(&self) -> Vec<Option<usize>> {
        self.images.iter().map(AffineSubspace::dim).collect()
    }

    /// Each image contains the next one.
    pub fn is_non_increasing(&self) -> bool {
        self.images.windows(2).all(|w| w[1].is_subset_of(&w[0]))
    }
}

/// Computes the chain `f_{nm}(X_m)`, `n <= m <= cutoff`, and its plateau.
///
/// A plateau is only evidence of stabilization: the chain may still shrink
/// beyond the cutoff.
pub fn universal_spaces<S: ProjectiveSequence + ?Sized>(
    seq: &S,
    n: usize,
    cutoff: usize,
    plateau_k: usize,
) -> Result<UniversalChain> {
    if cutoff < n {
        return Err(Error::InvalidArgument(format!("cutoff {cutoff} below level {n}")));
    }
    if plateau_k == 0 {
        return Err(Error::InvalidArgument("plateau length must be at least 1".into()));
    }
    let mut images = Vec::with_capacity(cutoff - n + 1);
    for m in n..=cutoff {
        images.push(seq.bonding(n, m)?.image(&seq.level(m)?)?);
    }
    let plateau = (0..images.len())
        .find(|&s| s + plateau_k <= images.len() && images[s..s + plateau_k].iter().all(|x| *x == images[s]))
        .map(|s| n + s);
    Ok(UniversalChain { n, images, plateau })
}

/// Lifts `x ∈ f_{n,p}(X_p)` to `x' ∈ f_{n+1,p}(X_p)` with `f_{n,n+1}(x') = x`,
/// choosing the canonical solution. `None` if `x` has no preimage at `p`.
pub fn lift_element<S: ProjectiveSequence + ?Sized>(
    seq: &S,
    n: usize,
    x: &[u32],
    witness_level: usize,
) -> Result<Option<Vec<u32>>> {
    if witness_level < n + 1 {
        return Err(Error::InvalidArgument(format!("witness level {witness_level} below {}", n + 1)));
    }
    let above = seq.bonding(n + 1, witness_level)?.image(&seq.level(witness_level)?)?;
    lift_within(&seq.bonding(n, n + 1)?, &above, x)
}

fn lift_within(step: &Restriction, above: &AffineSubspace, x: &[u32]) -> Result<Option<Vec<u32>>> {
    Ok(step.fiber(above, x)?.representative().map(<[u32]>::to_vec))
}

/// One step of prefix extraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftRecord {
    pub n: usize,
    pub witness_level: usize,
    /// `x'_n`.
    pub from: Vec<u32>,
    /// `x'_{n+1}`.
    pub to: Vec<u32>,
}

impl LiftRecord {
    /// `f_{n,n+1}(x'_{n+1}) = x'_n`, and `x'_{n+1}` extends to level `witness_level`.
    pub fn check<S: ProjectiveSequence + ?Sized>(&self, seq: &S) -> Result<bool> {
        let step = seq.bonding(self.n, self.n + 1)?;
        if step.apply(&self.to) != self.from {
            return Ok(false);
        }
        let above = seq.bonding(self.n + 1, self.witness_level)?.image(&seq.level(self.witness_level)?)?;
        Ok(above.contains(&self.to))
    }
}

/// A compatible chain `x'_0 <- x'_1 <- ... <- x'_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractedPrefix {
    /// `prefix[n]` is `x'_n` on `A_n`, flattened.
    pub prefix: Vec<Vec<u32>>,
    pub chains: Vec<UniversalChain>,
    pub lifts: Vec<LiftRecord>,
}

impl ExtractedPrefix {
    pub fn top(&self) -> &[u32] {
        self.prefix.last().expect("prefix has level 0")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extraction {
    Prefix(ExtractedPrefix),
    /// `X_level` is empty, so the inverse limit is empty.
    Empty { level: usize },
    /// The chain at `level` shows no plateau by the cutoff.
    Cutoff { level: usize },
}

/// Builds `x'_0, ..., x'_N` from the chains at levels `0..=N`.
///
/// Every `x'_n` is taken in `f_{n,cutoff}(X_cutoff)`, so each lift is a
/// single affine solve that cannot fail once `X_cutoff` is nonempty.
pub fn extract_limit_prefix<S: ProjectiveSequence + ?Sized>(
    seq: &S,
    top: usize,
    cutoff: usize,
    plateau_k: usize,
) -> Result<Extraction> {
    if cutoff < top {
        return Err(Error::InvalidArgument(format!("cutoff {cutoff} below level {top}")));
    }
    for m in 0..=cutoff {
        if seq.level(m)?.is_empty() {
            return Ok(Extraction::Empty { level: m });
        }
    }
    let mut chains = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let chain = universal_spaces(seq, n, cutoff, plateau_k)?;
        if chain.plateau.is_none() {
            return Ok(Extraction::Cutoff { level: n });
        }
        chains.push(chain);
    }
    let first = chains[0].last().representative().expect("nonempty level has nonempty image").to_vec();
    let mut prefix = vec![first];
    let mut lifts = Vec::with_capacity(top);
    for n in 0..top {
        let from = prefix[n].clone();
        let to = lift_within(&seq.bonding(n, n + 1)?, chains[n + 1].last(), &from)?
            .ok_or_else(|| Error::InvalidArgument(format!("no lift from level {n} at witness level {cutoff}")))?;
        lifts.push(LiftRecord { n, witness_level: cutoff, from, to: to.clone() });
        prefix.push(to);
    }
    Ok(Extraction::Prefix(ExtractedPrefix { prefix, chains, lifts }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GroupDescriptor, GroupElement};

    fn f2() -> Fp {
        Fp::new(2).unwrap()
    }

    fn full_sequence(f: Fp) -> WindowSequence<'static> {
        let balls = BallSequence::new(GroupDescriptor::integers(), 0);
        WindowSequence::new(balls, f, 1, move |_, w| Ok(AffineSubspace::full(f, w.len())))
    }

    #[test]
    fn bonding_maps_compose() {
        let seq = full_sequence(f2());
        for n in 0..3 {
            assert!(seq.bonding(n, n).unwrap().matrix(f2()).is_identity());
            for m in n..4 {
                for k in m..5 {
                    let nk = seq.bonding(n, k).unwrap().matrix(f2());
                    let nm = seq.bonding(n, m).unwrap().matrix(f2());
                    let mk = seq.bonding(m, k).unwrap().matrix(f2());
                    assert_eq!(nk, nm.mul(&mk).unwrap());
                }
            }
        }
        assert!(seq.bonding(2, 1).is_err());
    }

    #[test]
    fn constant_sequence_plateaus_immediately() {
        let seq = full_sequence(f2());
        let chain = universal_spaces(&seq, 1, 5, 2).unwrap();
        assert_eq!(chain.plateau, Some(1));
        assert!(chain.is_non_increasing());
        assert_eq!(chain.cutoff(), 5);
        assert_eq!(chain.dims(), vec![Some(3); 5]);
    }

    #[test]
    fn lifting_through_full_levels_pads_with_zeros() {
        let seq = full_sequence(f2());
        let x = vec![1, 0, 1];
        let up = lift_element(&seq, 1, &x, 3).unwrap().unwrap();
        assert_eq!(up, vec![0, 1, 0, 1, 0]);
    }

    #[test]
    fn single_point_levels_extract_that_chain() {
        let f = f2();
        // X_n = { the indicator of the non-negative cells of A_n }
        let balls = BallSequence::new(GroupDescriptor::integers(), 0);
        let seq = WindowSequence::new(balls, f, 1, move |_, w| {
            let v = w.iter().map(|g| u32::from(matches!(g, GroupElement::Int(k) if *k >= 0))).collect();
            Ok(AffineSubspace::point(f, v))
        });
        let Extraction::Prefix(p) = extract_limit_prefix(&seq, 3, 6, 2).unwrap() else { panic!() };
        assert_eq!(p.top(), &[0, 0, 0, 1, 1, 1, 1]);
        for rec in &p.lifts {
            assert!(rec.check(&seq).unwrap());
        }
    }

    #[test]
    fn empty_level_is_reported() {
        let f = f2();
        let balls = BallSequence::new(GroupDescriptor::integers(), 0);
        let seq = WindowSequence::new(balls, f, 1, move |n, w| {
            Ok(if n >= 2 { AffineSubspace::empty(f, w.len()) } else { AffineSubspace::full(f, w.len()) })
        });
        assert_eq!(extract_limit_prefix(&seq, 1, 4, 2).unwrap(), Extraction::Empty { level: 2 });
    }

    #[test]
    fn shrinking_chain_without_plateau_is_cutoff() {
        let f = f2();
        // X_m forces the cells -m..=m-1 of A_m to zero, so f_{0m}(X_m) keeps shrinking until it is a point
        let balls = BallSequence::new(GroupDescriptor::integers(), 2);
        let seq = WindowSequence::new(balls, f, 1, move |m, w| {
            let free: Vec<Vec<u32>> = (0..w.len())
                .filter(|&i| {
                    let GroupElement::Int(k) = w.as_slice()[i] else { unreachable!() };
                    !(-(m as i64)..m as i64).contains(&k)
                })
                .map(|i| {
                    let mut v = vec![0; w.len()];
                    v[i] = 1;
                    v
                })
                .collect();
            AffineSubspace::new(vec![0; w.len()], Subspace::span(f, w.len(), free)?)
        });
        let chain = universal_spaces(&seq, 0, 1, 2).unwrap();
        assert!(chain.is_non_increasing());
        assert_eq!(chain.plateau, None);
        assert_eq!(extract_limit_prefix(&seq, 0, 1, 2).unwrap(), Extraction::Cutoff { level: 0 });
    }

    #[test]
    fn fiber_of_a_line() {
        let f = f2();
        // a = {(t, t, 1)}; restrict to coordinate 0
        let a = AffineSubspace::new(vec![0, 0, 1], Subspace::span(f, 3, vec![vec![1, 1, 0]]).unwrap()).unwrap();
        let r = Restriction { source_len: 3, coords: vec![0] };
        let fib = r.fiber(&a, &[1]).unwrap();
        assert_eq!(fib.members(), vec![vec![1, 1, 1]]);
        let r = Restriction { source_len: 3, coords: vec![2] };
        assert!(r.fiber(&a, &[0]).unwrap().is_empty());
        assert_eq!(r.fiber(&a, &[1]).unwrap(), a);
    }
}
