//! Finitely generated groups in canonical form: integers, integer lattices,
//! finite groups given by a multiplication table, and free groups.
//!
//! Every element has a unique canonical form ([`GroupElement`]), so equality
//! of elements is structural. Word-metric balls provide the exhausting
//! windows `A_n` used by the window maps and the projective sequences.

mod element;
pub mod lattice;
mod subgroup;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

pub use element::{GroupElement, Letter};
pub use subgroup::{subgroup_generated, Embedding, Subgroup};

use crate::error::{Error, Result};

/// Upper bound on the number of elements a ball may hold.
pub const BALL_LIMIT: usize = 2_000_000;

/// Multiplication table of a finite group over element ids `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTable {
    table: Arc<Vec<Vec<usize>>>,
    identity: usize,
    inverses: Arc<Vec<usize>>,
}

impl FiniteTable {
    /// Validates closure, identity, inverses and associativity.
    pub fn new(table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if identity >= n {
            return Err(Error::InvalidTable(format!("identity {identity} out of range")));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidTable(format!("entry {bad} out of range in row {i}")));
            }
        }
        for a in 0..n {
            if table[identity][a] != a || table[a][identity] != a {
                return Err(Error::InvalidTable(format!("{identity} is not an identity")));
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for a in 0..n {
            let inv = (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity);
            match inv {
                Some(b) => inverses[a] = b,
                None => return Err(Error::InvalidTable(format!("element {a} has no inverse"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidTable(format!(
                            "associativity fails on ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(Self { table: Arc::new(table), identity, inverses: Arc::new(inverses) })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }
}

/// Kind of a supported group, with its shape parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Integers,
    Lattice { dim: usize },
    Finite(FiniteTable),
    Free { rank: usize },
}

/// A finitely generated group together with the generating set that defines
/// its word metric.
///
/// Infinite kinds always use their standard generators (`1`, the standard
/// basis, the free generators). Finite groups default to all elements as
/// generators and accept any generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDescriptor {
    kind: GroupKind,
    generators: Vec<GroupElement>,
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GroupKind::Integers => write!(f, "Z"),
            GroupKind::Lattice { dim } => write!(f, "Z^{dim}"),
            GroupKind::Finite(t) => write!(f, "finite group of order {}", t.order()),
            GroupKind::Free { rank } => write!(f, "F{rank}"),
        }
    }
}

impl GroupDescriptor {
    pub fn integers() -> Self {
        Self { kind: GroupKind::Integers, generators: vec![GroupElement::Int(1)] }
    }

    pub fn lattice(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGroup("lattice dimension must be positive".into()));
        }
        let generators = (0..dim)
            .map(|i| {
                let mut v = vec![0; dim];
                v[i] = 1;
                GroupElement::Lattice(v)
            })
            .collect();
        Ok(Self { kind: GroupKind::Lattice { dim }, generators })
    }

    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 || rank > 26 {
            return Err(Error::InvalidGroup(format!("free rank {rank} not in 1..=26")));
        }
        let generators = (0..rank as u16)
            .map(|g| GroupElement::Word(vec![Letter::new(g, false)]))
            .collect();
        Ok(Self { kind: GroupKind::Free { rank }, generators })
    }

    /// Finite group from a multiplication table; generators default to all elements.
    pub fn finite(table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let t = FiniteTable::new(table, identity)?;
        let generators = (0..t.order()).map(GroupElement::Finite).collect();
        Ok(Self { kind: GroupKind::Finite(t), generators })
    }

    /// Finite group with an explicit generating set, which must generate the whole group.
    pub fn finite_with_generators(
        table: Vec<Vec<usize>>,
        identity: usize,
        generators: Vec<GroupElement>,
    ) -> Result<Self> {
        let mut g = Self::finite(table, identity)?;
        for x in &generators {
            g.check(x)?;
        }
        let order = g.order().unwrap_or(0);
        g.generators = generators;
        let reached = g.closure_size();
        if reached != order {
            return Err(Error::InvalidGroup(format!(
                "generators reach {reached} of {order} elements"
            )));
        }
        Ok(g)
    }

    /// Cyclic group `Z/n` with ids equal to residues.
    pub fn cyclic(n: usize) -> Result<Self> {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::finite(table, 0)
    }

    /// Symmetric group on `k` letters; ids enumerate permutations in
    /// lexicographic order (id 0 is the identity), product is composition
    /// `(a*b)(i) = a(b(i))`.
    pub fn symmetric(k: usize) -> Result<Self> {
        if k == 0 || k > 6 {
            return Err(Error::InvalidGroup(format!("symmetric group degree {k} not in 1..=6")));
        }
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permutations(&mut (0..k).collect(), 0, &mut perms);
        perms.sort();
        let index: HashMap<Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let ab: Vec<usize> = (0..k).map(|i| a[b[i]]).collect();
                        index[&ab]
                    })
                    .collect()
            })
            .collect();
        Self::finite(table, 0)
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, GroupKind::Finite(_))
    }

    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            GroupKind::Finite(t) => Some(t.order()),
            _ => None,
        }
    }

    /// All elements of a finite group in canonical order.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        self.order().map(|n| (0..n).map(GroupElement::Finite).collect())
    }

    pub fn identity(&self) -> GroupElement {
        match &self.kind {
            GroupKind::Integers => GroupElement::Int(0),
            GroupKind::Lattice { dim } => GroupElement::Lattice(vec![0; *dim]),
            GroupKind::Finite(t) => GroupElement::Finite(t.identity()),
            GroupKind::Free { .. } => GroupElement::Word(Vec::new()),
        }
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        match (&self.kind, a) {
            (GroupKind::Integers, GroupElement::Int(_)) => true,
            (GroupKind::Lattice { dim }, GroupElement::Lattice(v)) => v.len() == *dim,
            (GroupKind::Finite(t), GroupElement::Finite(id)) => *id < t.order(),
            (GroupKind::Free { rank }, GroupElement::Word(w)) => {
                w.iter().all(|l| (l.generator as usize) < *rank)
                    && w.windows(2).all(|p| p[1] != p[0].inv())
            }
            _ => false,
        }
    }

    pub fn check(&self, a: &GroupElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::ForeignElement { element: a.to_string(), group: self.to_string() })
        }
    }

    /// Group law on canonical forms, validating both operands.
    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn invert(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.inv(a))
    }

    /// Product of two elements already known to belong to this group.
    pub(crate) fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        use GroupElement::*;
        match (&self.kind, a, b) {
            (GroupKind::Integers, Int(x), Int(y)) => Int(x + y),
            (GroupKind::Lattice { .. }, Lattice(x), Lattice(y)) => {
                Lattice(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (GroupKind::Finite(t), Finite(x), Finite(y)) => Finite(t.mul(*x, *y)),
            (GroupKind::Free { .. }, Word(x), Word(y)) => {
                let mut out = x.clone();
                for &l in y {
                    if out.last() == Some(&l.inv()) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                Word(out)
            }
            _ => panic!("element kinds do not match group {self}"),
        }
    }

    pub(crate) fn inv(&self, a: &GroupElement) -> GroupElement {
        use GroupElement::*;
        match (&self.kind, a) {
            (GroupKind::Integers, Int(x)) => Int(-x),
            (GroupKind::Lattice { .. }, Lattice(x)) => Lattice(x.iter().map(|p| -p).collect()),
            (GroupKind::Finite(t), Finite(x)) => Finite(t.inv(*x)),
            (GroupKind::Free { .. }, Word(w)) => Word(w.iter().rev().map(|l| l.inv()).collect()),
            _ => panic!("element kind does not match group {self}"),
        }
    }

    /// `a^k` for any integer `k`.
    pub(crate) fn pow(&self, a: &GroupElement, k: i64) -> GroupElement {
        let base = if k < 0 { self.inv(a) } else { a.clone() };
        let mut acc = self.identity();
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            sq = self.mul(&sq, &sq);
            e >>= 1;
        }
        acc
    }

    /// Word length of `a` with respect to the generating set.
    pub fn word_length(&self, a: &GroupElement) -> Result<usize> {
        self.check(a)?;
        Ok(match (&self.kind, a) {
            (GroupKind::Integers, GroupElement::Int(x)) => x.unsigned_abs() as usize,
            (GroupKind::Lattice { .. }, GroupElement::Lattice(v)) => {
                v.iter().map(|x| x.unsigned_abs() as usize).sum()
            }
            (GroupKind::Free { .. }, GroupElement::Word(w)) => w.len(),
            (GroupKind::Finite(t), GroupElement::Finite(id)) => self.finite_distances(t)[*id],
            _ => unreachable!(),
        })
    }

    fn finite_distances(&self, t: &FiniteTable) -> Vec<usize> {
        let mut dist = vec![usize::MAX; t.order()];
        let steps = self.step_set();
        let mut queue = VecDeque::from([t.identity()]);
        dist[t.identity()] = 0;
        while let Some(x) = queue.pop_front() {
            for s in &steps {
                if let GroupElement::Finite(s) = s {
                    let y = t.mul(x, *s);
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        dist
    }

    fn step_set(&self) -> Vec<GroupElement> {
        let mut steps: BTreeSet<GroupElement> = BTreeSet::new();
        for g in &self.generators {
            steps.insert(g.clone());
            steps.insert(self.inv(g));
        }
        steps.remove(&self.identity());
        steps.into_iter().collect()
    }

    fn closure_size(&self) -> usize {
        match &self.kind {
            GroupKind::Finite(t) => {
                self.finite_distances(t).iter().filter(|&&d| d != usize::MAX).count()
            }
            _ => usize::MAX,
        }
    }

    /// Closed-form size of the ball of radius `n` for infinite kinds
    /// (saturating); exact count for finite groups.
    pub fn ball_size(&self, n: usize) -> u128 {
        match &self.kind {
            GroupKind::Integers => 2 * n as u128 + 1,
            GroupKind::Lattice { dim } => {
                // sum_k 2^k C(d,k) C(n,k)
                let d = *dim as u128;
                let n = n as u128;
                let mut total: u128 = 0;
                for k in 0..=d.min(n) {
                    let term = 1u128
                        .checked_shl(k as u32)
                        .and_then(|p| p.checked_mul(binomial(d, k)))
                        .and_then(|p| p.checked_mul(binomial(n, k)));
                    total = match term {
                        Some(t) => total.saturating_add(t),
                        None => return u128::MAX,
                    };
                }
                total
            }
            GroupKind::Free { rank } => {
                // 1 + sum_{k=1}^{n} 2r (2r-1)^{k-1}
                let r = *rank as u128;
                let mut total: u128 = 1;
                let mut layer: u128 = 2 * r;
                for _ in 0..n {
                    total = total.saturating_add(layer);
                    layer = layer.saturating_mul(2 * r - 1);
                }
                total
            }
            GroupKind::Finite(t) => {
                self.finite_distances(t).iter().filter(|&&d| d <= n).count() as u128
            }
        }
    }

    /// Word-metric ball of radius `n` about the identity, in canonical order.
    pub fn ball(&self, n: usize) -> Result<Window> {
        let predicted = self.ball_size(n);
        if predicted > BALL_LIMIT as u128 {
            return Err(Error::ResourceLimit(format!(
                "ball of radius {n} in {self} has {predicted} elements (limit {BALL_LIMIT})"
            )));
        }
        let steps = self.step_set();
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let id = self.identity();
        seen.insert(id.clone());
        let mut frontier = vec![id];
        for _ in 0..n {
            let mut next = Vec::new();
            for x in &frontier {
                for s in &steps {
                    let y = self.mul(x, s);
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(Window::from_iter(seen))
    }

    /// `{ g : g m ∈ A for all m ∈ M }`.
    pub fn interior(&self, a: &Window, m: &[GroupElement]) -> Result<Window> {
        let Some(m0) = m.first() else {
            return Err(Error::InvalidArgument("memory set must be nonempty".into()));
        };
        for x in a.iter().chain(m) {
            self.check(x)?;
        }
        let m0_inv = self.inv(m0);
        let out = a
            .iter()
            .map(|x| self.mul(x, &m0_inv))
            .filter(|g| m.iter().all(|mm| a.contains(&self.mul(g, mm))));
        Ok(Window::from_iter(out))
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn permutations(cur: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if start == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in start..cur.len() {
        cur.swap(start, i);
        permutations(cur, start + 1, out);
        cur.swap(start, i);
    }
}

/// A finite set of group elements kept in canonical order.
///
/// The position of an element in a window fixes its block in the `vec()`
/// layout of patterns and window matrices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Window {
    elems: Vec<GroupElement>,
}

impl Window {
    pub fn new(mut elems: Vec<GroupElement>) -> Self {
        elems.sort();
        elems.dedup();
        Self { elems }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupElement> {
        self.elems.iter()
    }

    pub fn as_slice(&self) -> &[GroupElement] {
        &self.elems
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elems.binary_search(g).ok()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index_of(g).is_some()
    }

    pub fn is_subset_of(&self, other: &Window) -> bool {
        self.elems.iter().all(|g| other.contains(g))
    }
}

impl FromIterator<GroupElement> for Window {
    fn from_iter<I: IntoIterator<Item = GroupElement>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Window {
    type Item = &'a GroupElement;
    type IntoIter = std::slice::Iter<'a, GroupElement>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// Exhausting sequence of windows `A_n = ball(offset + n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallSequence {
    group: GroupDescriptor,
    offset: usize,
}

impl BallSequence {
    pub fn new(group: GroupDescriptor, offset: usize) -> Self {
        Self { group, offset }
    }

    /// Offset chosen as the largest word length over `memory ∪ {1}`, so that
    /// the memory set lies in `A_0`.
    pub fn for_memory(group: &GroupDescriptor, memory: &[GroupElement]) -> Result<Self> {
        let mut offset = 0;
        for m in memory {
            offset = offset.max(group.word_length(m)?);
        }
        Ok(Self::new(group.clone(), offset))
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn level(&self, n: usize) -> Result<Window> {
        self.group.ball(self.offset + n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<GroupElement> {
        v.iter().map(|&k| GroupElement::Int(k)).collect()
    }

    #[test]
    fn multiply_examples() {
        let z = GroupDescriptor::integers();
        assert_eq!(z.multiply(&GroupElement::Int(2), &GroupElement::Int(3)).unwrap(), GroupElement::Int(5));

        let f2 = GroupDescriptor::free(2).unwrap();
        let a = GroupElement::word("a").unwrap();
        let a_inv = GroupElement::word("A").unwrap();
        assert_eq!(f2.multiply(&a, &a_inv).unwrap(), f2.identity());

        let z3 = GroupDescriptor::cyclic(3).unwrap();
        assert_eq!(
            z3.multiply(&GroupElement::Finite(2), &GroupElement::Finite(2)).unwrap(),
            GroupElement::Finite(1)
        );
    }

    #[test]
    fn mismatched_elements_are_rejected() {
        let z = GroupDescriptor::integers();
        let err = z.multiply(&GroupElement::Int(1), &GroupElement::Finite(0));
        assert!(matches!(err, Err(Error::ForeignElement { .. })));
        let f1 = GroupDescriptor::free(1).unwrap();
        assert!(f1.check(&GroupElement::word("b").unwrap()).is_err());
    }

    #[test]
    fn invert_examples() {
        let z = GroupDescriptor::integers();
        assert_eq!(z.invert(&GroupElement::Int(5)).unwrap(), GroupElement::Int(-5));
        let f1 = GroupDescriptor::free(1).unwrap();
        assert_eq!(f1.invert(&GroupElement::word("aa").unwrap()).unwrap().to_string(), "AA");
        let z3 = GroupDescriptor::cyclic(3).unwrap();
        assert_eq!(z3.invert(&GroupElement::Finite(2)).unwrap(), GroupElement::Finite(1));
    }

    #[test]
    fn ball_examples() {
        let z = GroupDescriptor::integers();
        assert_eq!(z.ball(2).unwrap().as_slice(), ints(&[-2, -1, 0, 1, 2]).as_slice());

        let z2 = GroupDescriptor::lattice(2).unwrap();
        let b = z2.ball(1).unwrap();
        let expected = Window::new(vec![
            GroupElement::lattice(&[0, 0]),
            GroupElement::lattice(&[1, 0]),
            GroupElement::lattice(&[-1, 0]),
            GroupElement::lattice(&[0, 1]),
            GroupElement::lattice(&[0, -1]),
        ]);
        assert_eq!(b, expected);

        let f2 = GroupDescriptor::free(2).unwrap();
        let shown: Vec<String> = f2.ball(1).unwrap().iter().map(|e| e.to_string()).collect();
        assert_eq!(shown, ["1", "a", "A", "b", "B"]);
    }

    #[test]
    fn ball_sizes_match_closed_forms() {
        let groups = [
            GroupDescriptor::integers(),
            GroupDescriptor::lattice(2).unwrap(),
            GroupDescriptor::lattice(3).unwrap(),
            GroupDescriptor::free(1).unwrap(),
            GroupDescriptor::free(2).unwrap(),
            GroupDescriptor::free(3).unwrap(),
        ];
        for g in &groups {
            let mut prev = Window::default();
            for n in 0..5 {
                let b = g.ball(n).unwrap();
                assert_eq!(b.len() as u128, g.ball_size(n), "{g} radius {n}");
                assert!(prev.is_subset_of(&b));
                prev = b;
            }
        }
        assert_eq!(GroupDescriptor::lattice(2).unwrap().ball_size(2), 13);
        assert_eq!(GroupDescriptor::free(2).unwrap().ball_size(2), 17);
    }

    #[test]
    fn finite_balls_saturate() {
        let z6 = GroupDescriptor::cyclic(6).unwrap();
        assert_eq!(z6.ball(1).unwrap().len(), 6);
        let g = GroupDescriptor::finite_with_generators(
            GroupDescriptor::cyclic(6).unwrap().kind_table(),
            0,
            vec![GroupElement::Finite(1)],
        )
        .unwrap();
        assert_eq!(g.ball(1).unwrap().len(), 3);
        assert_eq!(g.ball(3).unwrap().len(), 6);
        assert_eq!(g.word_length(&GroupElement::Finite(3)).unwrap(), 3);
    }

    #[test]
    fn non_generating_sets_are_rejected() {
        let t = GroupDescriptor::cyclic(6).unwrap().kind_table();
        let r = GroupDescriptor::finite_with_generators(t, 0, vec![GroupElement::Finite(2)]);
        assert!(matches!(r, Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn bad_tables_are_rejected() {
        // not associative: a Latin square that is not a group
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(GroupDescriptor::finite(t, 0), Err(Error::InvalidTable(_))));
        assert!(GroupDescriptor::finite(vec![vec![0, 1], vec![1, 1]], 0).is_err());
        assert!(GroupDescriptor::finite(vec![vec![0]], 1).is_err());
    }

    #[test]
    fn symmetric_group_is_nonabelian() {
        let s3 = GroupDescriptor::symmetric(3).unwrap();
        assert_eq!(s3.order(), Some(6));
        let (a, b) = (GroupElement::Finite(1), GroupElement::Finite(2));
        assert_ne!(s3.mul(&a, &b), s3.mul(&b, &a));
    }

    #[test]
    fn interior_examples() {
        let z = GroupDescriptor::integers();
        let a = z.ball(2).unwrap();
        let b = z.interior(&a, &ints(&[0, 1])).unwrap();
        assert_eq!(b.as_slice(), ints(&[-2, -1, 0, 1]).as_slice());
        assert_eq!(z.interior(&a, &ints(&[0])).unwrap(), a);
    }

    #[test]
    fn interior_on_plane_matches_scan() {
        // Frozen from a brute-force membership scan over the L1 ball of radius 2.
        let z2 = GroupDescriptor::lattice(2).unwrap();
        let a = z2.ball(2).unwrap();
        let m = [GroupElement::lattice(&[0, 0]), GroupElement::lattice(&[1, 0])];
        let b = z2.interior(&a, &m).unwrap();
        let expected: Vec<GroupElement> = [[-2, 0], [-1, -1], [-1, 0], [-1, 1], [0, -1], [0, 0], [0, 1], [1, 0]]
            .iter()
            .map(|c| GroupElement::lattice(c))
            .collect();
        assert_eq!(b.as_slice(), expected.as_slice());
    }

    #[test]
    fn ball_sequence_contains_memory() {
        let f2 = GroupDescriptor::free(2).unwrap();
        let memory = vec![f2.identity(), GroupElement::word("ab").unwrap()];
        let seq = BallSequence::for_memory(&f2, &memory).unwrap();
        assert_eq!(seq.offset(), 2);
        let a0 = seq.level(0).unwrap();
        assert!(memory.iter().all(|m| a0.contains(m)));
    }

    #[test]
    fn resource_limit_is_reported() {
        let f3 = GroupDescriptor::free(3).unwrap();
        assert!(matches!(f3.ball(40), Err(Error::ResourceLimit(_))));
    }

    impl GroupDescriptor {
        fn kind_table(&self) -> Vec<Vec<usize>> {
            match &self.kind {
                GroupKind::Finite(t) => t.rows().to_vec(),
                _ => panic!(),
            }
        }
    }
}
