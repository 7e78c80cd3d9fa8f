//! Linear cellular automata as data.
//!
//! A rule is a finite memory set `M` with one `dim x dim` block per memory
//! element; the automaton acts by `τ(x)(g) = Σ_m blocks[m] · x(g m)`.
//! Rules are stored normalized (canonical order, zero blocks pruned, the
//! identity always present), so two automata are equal exactly when their
//! stored rules are equal.

mod config;

use std::collections::{BTreeMap, BTreeSet};

pub use config::{ConfigRepr, Configuration, Pattern};

use crate::error::{Error, Result};
use crate::groups::{BallSequence, GroupDescriptor, GroupElement, GroupKind, Window};
use crate::linalg::{Fp, Matrix};

/// Memory set with one linear block per element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalRule {
    memory: Vec<GroupElement>,
    blocks: Vec<Matrix>,
}

impl LocalRule {
    pub fn new(memory: Vec<GroupElement>, blocks: Vec<Matrix>) -> Result<Self> {
        if memory.len() != blocks.len() {
            return Err(Error::InvalidRule(format!("{} memory elements but {} blocks", memory.len(), blocks.len())));
        }
        let distinct: BTreeSet<&GroupElement> = memory.iter().collect();
        if distinct.len() != memory.len() {
            return Err(Error::InvalidRule("memory elements must be distinct".into()));
        }
        if let Some(b) = blocks.first() {
            let (f, d) = (b.field(), b.rows());
            if blocks.iter().any(|m| m.field() != f || m.rows() != d || m.cols() != d) {
                return Err(Error::InvalidRule("blocks must be square of one size over one field".into()));
            }
        }
        Ok(Self { memory, blocks })
    }

    pub fn memory(&self) -> &[GroupElement] {
        &self.memory
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &Matrix)> {
        self.memory.iter().zip(&self.blocks)
    }

    pub fn block(&self, g: &GroupElement) -> Option<&Matrix> {
        self.memory.iter().position(|m| m == g).map(|i| &self.blocks[i])
    }

    /// Canonical order, zero blocks removed, identity present (with a zero
    /// block if necessary). The represented map is unchanged.
    pub fn normalize(&self, identity: &GroupElement, field: Fp, dim: usize) -> LocalRule {
        let mut entries: BTreeMap<GroupElement, Matrix> = self
            .iter()
            .filter(|(m, b)| *m == identity || !b.is_zero())
            .map(|(m, b)| (m.clone(), b.clone()))
            .collect();
        entries.entry(identity.clone()).or_insert_with(|| Matrix::zeros(field, dim, dim));
        let (memory, blocks) = entries.into_iter().unzip();
        LocalRule { memory, blocks }
    }
}

/// A linear cellular automaton `V^G -> V^G` with `V = GF(p)^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCA {
    group: GroupDescriptor,
    field: Fp,
    dim: usize,
    rule: LocalRule,
}

/// The finite linear map `τ_n : V^A -> V^B` with `B = interior(A, M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowMap {
    pub source: Window,
    pub target: Window,
    pub matrix: Matrix,
}

impl LinearCA {
    pub fn new(group: GroupDescriptor, field: Fp, dim: usize, rule: LocalRule) -> Result<Self> {
        for (m, b) in rule.iter() {
            group.check(m)?;
            if b.field() != field {
                return Err(Error::FieldMismatch(b.field().p(), field.p()));
            }
            if b.rows() != dim || b.cols() != dim {
                return Err(Error::InvalidRule(format!(
                    "block at {m} is {}x{}, expected {dim}x{dim}",
                    b.rows(),
                    b.cols()
                )));
            }
        }
        let rule = rule.normalize(&group.identity(), field, dim);
        Ok(Self { group, field, dim, rule })
    }

    pub fn from_blocks(
        group: GroupDescriptor,
        field: Fp,
        dim: usize,
        blocks: impl IntoIterator<Item = (GroupElement, Matrix)>,
    ) -> Result<Self> {
        let (memory, blocks) = blocks.into_iter().unzip();
        Self::new(group, field, dim, LocalRule::new(memory, blocks)?)
    }

    pub fn identity(group: GroupDescriptor, field: Fp, dim: usize) -> Self {
        let id = group.identity();
        Self::from_blocks(group, field, dim, [(id, Matrix::identity(field, dim))]).expect("identity rule")
    }

    pub fn zero(group: GroupDescriptor, field: Fp, dim: usize) -> Self {
        Self::from_blocks(group, field, dim, []).expect("zero rule")
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rule(&self) -> &LocalRule {
        &self.rule
    }

    pub fn memory(&self) -> &[GroupElement] {
        self.rule.memory()
    }

    pub fn block(&self, g: &GroupElement) -> Option<&Matrix> {
        self.rule.block(g)
    }

    /// Memory elements carrying a nonzero block: the smallest memory set.
    pub fn minimal_memory(&self) -> Vec<GroupElement> {
        self.rule.iter().filter(|(_, b)| !b.is_zero()).map(|(m, _)| m.clone()).collect()
    }

    /// `A_n = ball(r0 + n)` with `r0` the largest word length in the memory set.
    pub fn ball_sequence(&self) -> Result<BallSequence> {
        BallSequence::for_memory(&self.group, self.memory())
    }

    pub fn is_identity(&self) -> bool {
        self.rule.memory.len() == 1 && self.rule.blocks[0].is_identity()
    }

    fn same_space(&self, other: &LinearCA) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(format!("{} vs {}", self.group, other.group)));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p(), other.field.p()));
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!("dim {} vs {}", self.dim, other.dim)));
        }
        Ok(())
    }

    /// `self ∘ inner`: blocks convolve over the group law.
    pub fn compose(&self, inner: &LinearCA) -> Result<LinearCA> {
        self.same_space(inner)?;
        let mut acc: BTreeMap<GroupElement, Matrix> = BTreeMap::new();
        for (m2, b2) in self.rule.iter() {
            for (m1, b1) in inner.rule.iter() {
                let prod = b2.mul(b1)?;
                let key = self.group.mul(m2, m1);
                match acc.get_mut(&key) {
                    Some(existing) => existing.add_assign(&prod),
                    None => {
                        acc.insert(key, prod);
                    }
                }
            }
        }
        Self::from_blocks(self.group.clone(), self.field, self.dim, acc)
    }

    /// `acc += Σ_m blocks[m] · value(g m)`.
    fn accumulate<F>(&self, g: &GroupElement, acc: &mut [u32], mut value: F) -> Result<()>
    where
        F: FnMut(&GroupElement) -> Result<Option<Vec<u32>>>,
    {
        let f = self.field;
        for (m, b) in self.rule.iter() {
            let gm = self.group.mul(g, m);
            if let Some(v) = value(&gm)? {
                for (r, a) in acc.iter_mut().enumerate() {
                    let row = b.row(r);
                    for (&c, &x) in row.iter().zip(&v) {
                        if c != 0 && x != 0 {
                            *a = f.mul_add(*a, c, x);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Evaluates the rule on every `g` whose neighbourhood (the cells with a
    /// nonzero block) lies inside the pattern's domain. The zero automaton
    /// is evaluated on the domain itself.
    pub fn apply_pattern(&self, x: &Pattern) -> Result<Pattern> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!("pattern dim {} vs {}", x.dim(), self.dim)));
        }
        x.check(&self.group, self.field)?;
        let mut neighbourhood = self.minimal_memory();
        if neighbourhood.is_empty() {
            neighbourhood.push(self.group.identity());
        }
        let out_domain = self.group.interior(&x.domain(), &neighbourhood)?;
        let mut cells = Vec::with_capacity(out_domain.len());
        for g in &out_domain {
            let mut acc = vec![0u32; self.dim];
            self.accumulate(g, &mut acc, |h| Ok(x.get(h).map(<[u32]>::to_vec)))?;
            cells.push((g.clone(), acc));
        }
        Pattern::new(self.dim, cells)
    }

    /// Image of a global configuration; each family is mapped into itself.
    pub fn apply_config(&self, x: &Configuration) -> Result<Configuration> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!("configuration dim {} vs {}", x.dim(), self.dim)));
        }
        x.check(&self.group, self.field)?;
        match x.repr() {
            ConfigRepr::Finite(support) => {
                let mut candidates: BTreeSet<GroupElement> = BTreeSet::new();
                let inverses: Vec<GroupElement> = self.memory().iter().map(|m| self.group.inv(m)).collect();
                for s in support.keys() {
                    for mi in &inverses {
                        candidates.insert(self.group.mul(s, mi));
                    }
                }
                let mut cells = Vec::new();
                for g in candidates {
                    let mut acc = vec![0u32; self.dim];
                    self.accumulate(&g, &mut acc, |h| Ok(support.get(h).cloned()))?;
                    cells.push((g, acc));
                }
                Configuration::finite(self.dim, cells)
            }
            ConfigRepr::Constant(v) => {
                let mut acc = vec![0u32; self.dim];
                self.accumulate(&self.group.identity(), &mut acc, |_| Ok(Some(v.clone())))?;
                Configuration::constant(self.dim, acc)
            }
            ConfigRepr::Periodic(values) => {
                if !matches!(self.group.kind(), GroupKind::Integers) {
                    return Err(Error::InvalidConfiguration("periodic configurations need G = Z".into()));
                }
                let mut out = Vec::with_capacity(values.len());
                for n in 0..values.len() as i64 {
                    let mut acc = vec![0u32; self.dim];
                    self.accumulate(&GroupElement::Int(n), &mut acc, |h| x.value_at(h).map(Some))?;
                    out.push(acc);
                }
                Configuration::periodic(self.dim, out)
            }
        }
    }

    /// Window map on `A_n` of [`ball_sequence`](Self::ball_sequence).
    pub fn window_map(&self, n: usize) -> Result<WindowMap> {
        let source = self.ball_sequence()?.level(n)?;
        self.window_map_on(&source)
    }

    /// Matrix of `x ↦ τ(x̃)|_B` on `V^A`, `B = interior(A, M)`.
    pub fn window_map_on(&self, source: &Window) -> Result<WindowMap> {
        let target = self.group.interior(source, self.memory())?;
        let d = self.dim;
        let mut matrix = Matrix::zeros(self.field, target.len() * d, source.len() * d);
        for (bi, g) in target.iter().enumerate() {
            for (m, b) in self.rule.iter() {
                let ai = source.index_of(&self.group.mul(g, m)).expect("interior guarantees gM ⊆ A");
                matrix.add_block(bi * d, ai * d, b);
            }
        }
        Ok(WindowMap { source: source.clone(), target, matrix })
    }

    /// Matrix of `x ↦ τ(x)` for `x` supported in `domain`, on every cell
    /// the result can be nonzero (`domain · M^-1`).
    pub(crate) fn support_map(&self, domain: &Window) -> Result<WindowMap> {
        let inverses: Vec<GroupElement> = self.memory().iter().map(|m| self.group.inv(m)).collect();
        let target: Window = domain.iter().flat_map(|s| inverses.iter().map(move |mi| (s, mi))).map(|(s, mi)| self.group.mul(s, mi)).collect();
        let d = self.dim;
        let mut matrix = Matrix::zeros(self.field, target.len() * d, domain.len() * d);
        for (bi, g) in target.iter().enumerate() {
            for (m, b) in self.rule.iter() {
                if let Some(ai) = domain.index_of(&self.group.mul(g, m)) {
                    matrix.add_block(bi * d, ai * d, b);
                }
            }
        }
        Ok(WindowMap { source: domain.clone(), target, matrix })
    }

    /// The full-group matrix of an automaton over a finite group.
    pub fn full_group_matrix(&self) -> Result<Matrix> {
        let elements = self
            .group
            .elements()
            .ok_or_else(|| Error::Unsupported(format!("full-group matrix over infinite group {}", self.group)))?;
        Ok(self.window_map_on(&Window::new(elements))?.matrix)
    }
}

/// Any map on configurations; lets equivariance be checked for maps that
/// are not given by a local rule.
pub trait ConfigMap {
    fn map(&self, x: &Configuration) -> Result<Configuration>;
}

impl ConfigMap for LinearCA {
    fn map(&self, x: &Configuration) -> Result<Configuration> {
        self.apply_config(x)
    }
}

/// True iff `τ(g x) = g τ(x)` on every sample.
pub fn equivariance_check<T: ConfigMap + ?Sized>(
    group: &GroupDescriptor,
    map: &T,
    samples: &[(GroupElement, Configuration)],
) -> Result<bool> {
    for (g, x) in samples {
        let lhs = map.map(&x.shift(group, g)?)?;
        let rhs = map.map(x)?.shift(group, g)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Fp {
        Fp::new(2).unwrap()
    }

    fn int(k: i64) -> GroupElement {
        GroupElement::Int(k)
    }

    fn scalar(f: Fp, v: i64) -> Matrix {
        Matrix::from_rows(f, &[vec![v]]).unwrap()
    }

    fn shift(f: Fp) -> LinearCA {
        LinearCA::from_blocks(GroupDescriptor::integers(), f, 1, [(int(1), scalar(f, 1))]).unwrap()
    }

    fn nilpotent2(f: Fp) -> Matrix {
        Matrix::from_rows(f, &[vec![0, 1], vec![0, 0]]).unwrap()
    }

    /// x(n) - N x(n+1): the j = 2 block of the nilpotent example.
    fn sigma2(f: Fp) -> LinearCA {
        LinearCA::from_blocks(
            GroupDescriptor::integers(),
            f,
            2,
            [(int(0), Matrix::identity(f, 2)), (int(1), nilpotent2(f).neg())],
        )
        .unwrap()
    }

    #[test]
    fn normalize_examples() {
        let f = f2();
        let id = int(0);
        let rule = LocalRule::new(vec![int(1)], vec![scalar(f, 1)]).unwrap();
        let n = rule.normalize(&id, f, 1);
        assert_eq!(n.memory(), &[int(0), int(1)]);
        assert!(n.blocks()[0].is_zero());

        let rule = LocalRule::new(vec![int(1), int(0)], vec![scalar(f, 0), scalar(f, 1)]).unwrap();
        let n = rule.normalize(&id, f, 1);
        assert_eq!(n.memory(), &[int(0)]);
        assert_eq!(n.normalize(&id, f, 1), n);
    }

    #[test]
    fn duplicate_memory_is_rejected() {
        let f = f2();
        assert!(LocalRule::new(vec![int(1), int(1)], vec![scalar(f, 1), scalar(f, 1)]).is_err());
    }

    #[test]
    fn apply_pattern_examples() {
        let f = f2();
        let p = Pattern::new(1, [(int(0), vec![1]), (int(1), vec![0]), (int(2), vec![1])]).unwrap();
        let out = shift(f).apply_pattern(&p).unwrap();
        let expected = Pattern::new(1, [(int(-1), vec![1]), (int(0), vec![0]), (int(1), vec![1])]).unwrap();
        assert_eq!(out, expected);

        let id = LinearCA::identity(GroupDescriptor::integers(), f, 1);
        assert_eq!(id.apply_pattern(&p).unwrap(), p);

        // x(n) + N x(n+1) on x(0) = x(1) = (0,1): output(0) = (0,1) + (1,0)
        let ca = LinearCA::from_blocks(
            GroupDescriptor::integers(),
            f,
            2,
            [(int(0), Matrix::identity(f, 2)), (int(1), nilpotent2(f))],
        )
        .unwrap();
        let x = Pattern::new(2, [(int(0), vec![0, 1]), (int(1), vec![0, 1])]).unwrap();
        let out = ca.apply_pattern(&x).unwrap();
        assert_eq!(out.get(&int(0)), Some(&[1, 1][..]));
        assert_eq!(out.len(), 1);

        assert!(id.apply_pattern(&Pattern::empty(1)).unwrap().is_empty());
    }

    #[test]
    fn apply_config_examples() {
        let f = f2();
        let z = GroupDescriptor::integers();
        let diff = LinearCA::from_blocks(z.clone(), f, 1, [(int(0), scalar(f, 1)), (int(1), scalar(f, 1))]).unwrap();
        assert!(diff.apply_config(&Configuration::zero(1)).unwrap().is_zero());
        assert!(diff.apply_config(&Configuration::constant(1, vec![1]).unwrap()).unwrap().is_zero());

        let f3 = Fp::new(3).unwrap();
        let s = shift(f3);
        let x = Configuration::periodic(1, vec![vec![1], vec![2]]).unwrap();
        let y = s.apply_config(&x).unwrap();
        assert_eq!(y, Configuration::periodic(1, vec![vec![2], vec![1]]).unwrap());

        let d = Configuration::delta(1, int(0), vec![1]).unwrap();
        assert_eq!(shift(f).apply_config(&d).unwrap(), Configuration::delta(1, int(-1), vec![1]).unwrap());
    }

    #[test]
    fn periodic_configs_need_integers() {
        let f = f2();
        let z2 = GroupDescriptor::lattice(2).unwrap();
        let ca = LinearCA::identity(z2, f, 1);
        let x = Configuration::periodic(1, vec![vec![1], vec![0]]).unwrap();
        assert!(ca.apply_config(&x).is_err());
    }

    #[test]
    fn compose_examples() {
        let f = f2();
        let s = shift(f);
        let ss = s.compose(&s).unwrap();
        assert_eq!(ss.minimal_memory(), vec![int(2)]);

        let nu = LinearCA::from_blocks(
            GroupDescriptor::integers(),
            f,
            2,
            [(int(0), Matrix::identity(f, 2)), (int(1), nilpotent2(f))],
        )
        .unwrap();
        assert!(nu.compose(&sigma2(f)).unwrap().is_identity());
        assert!(sigma2(f).compose(&nu).unwrap().is_identity());

        let id = LinearCA::identity(GroupDescriptor::integers(), f, 2);
        assert_eq!(sigma2(f).compose(&id).unwrap(), sigma2(f));
        assert!(id.is_identity());
        assert!(!shift(f).is_identity());

        let other = LinearCA::identity(GroupDescriptor::integers(), Fp::new(3).unwrap(), 2);
        assert!(sigma2(f).compose(&other).is_err());
    }

    #[test]
    fn sigma2_window_map_matches_patterns() {
        let f = f2();
        let ca = sigma2(f);
        let a = GroupDescriptor::integers().ball(1).unwrap();
        let wm = ca.window_map_on(&a).unwrap();
        assert_eq!(wm.target.as_slice(), &[int(-1), int(0)]);
        assert_eq!((wm.matrix.rows(), wm.matrix.cols()), (4, 6));
        for bits in 0u32..64 {
            let flat: Vec<u32> = (0..6).map(|i| (bits >> i) & 1).collect();
            let x = Pattern::from_flat(&a, 2, &flat).unwrap();
            let via_pattern = ca.apply_pattern(&x).unwrap().to_flat(&wm.target).unwrap();
            assert_eq!(wm.matrix.apply(&flat).unwrap(), via_pattern);
        }
    }

    #[test]
    fn identity_window_map_is_identity() {
        let f = f2();
        let id = LinearCA::identity(GroupDescriptor::lattice(2).unwrap(), f, 2);
        for n in 0..3 {
            let wm = id.window_map(n).unwrap();
            assert_eq!(wm.source, wm.target);
            assert!(wm.matrix.is_identity());
        }
    }

    #[test]
    fn shift_window_map_selects_coordinates() {
        let f = f2();
        let s = shift(f);
        let wm = s.window_map(2).unwrap();
        // A_2 = ball(3) = -3..3, B_2 = -3..2
        assert_eq!(wm.source.len(), 7);
        assert_eq!(wm.target.len(), 6);
        for r in 0..6 {
            for c in 0..7 {
                assert_eq!(wm.matrix.get(r, c), u32::from(c == r + 1));
            }
        }
    }

    struct NotEquivariant;

    impl ConfigMap for NotEquivariant {
        fn map(&self, x: &Configuration) -> Result<Configuration> {
            // keeps only the value at cell 0
            Configuration::delta(x.dim(), int(0), x.value_at(&int(0))?)
        }
    }

    #[test]
    fn equivariance_examples() {
        let f = f2();
        let z = GroupDescriptor::integers();
        let x = Configuration::finite(1, [(int(0), vec![1]), (int(4), vec![1])]).unwrap();
        assert!(equivariance_check(&z, &sigma2(f), &[(int(0), Configuration::delta(2, int(1), vec![1, 1]).unwrap())]).unwrap());
        assert!(equivariance_check(&z, &shift(f), &[(int(3), x.clone())]).unwrap());
        assert!(!equivariance_check(&z, &NotEquivariant, &[(int(3), x)]).unwrap());
    }

    #[test]
    fn full_group_matrix_requires_finite_group() {
        let f = f2();
        assert!(shift(f).full_group_matrix().is_err());
        let z3 = GroupDescriptor::cyclic(3).unwrap();
        let ca = LinearCA::from_blocks(z3, f, 1, [(GroupElement::Finite(1), scalar(f, 1))]).unwrap();
        let m = ca.full_group_matrix().unwrap();
        assert!(m.inverse().is_some());
    }
}
