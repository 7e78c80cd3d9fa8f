use std::collections::{BTreeSet, HashMap};

use super::lattice::{hermite_normal_form, integer_coordinates, rank};
use super::{GroupDescriptor, GroupElement, GroupKind, Letter};
use crate::error::{Error, Result};

/// An injective homomorphism `H -> G`, stored by the images of the
/// canonical generators of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Embedding {
    /// `H = Z`, `k -> image^k`.
    Cyclic { image: GroupElement },
    /// `H = Z^r`, `c -> sum_i c_i images_i` (ambient group abelian).
    Lattice { images: Vec<GroupElement> },
    /// `H` finite, element id `i -> images[i]`.
    Finite { images: Vec<GroupElement> },
}

/// A subgroup `H` of an ambient group `G`, with its own canonical forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    ambient: GroupDescriptor,
    group: GroupDescriptor,
    embedding: Embedding,
}

/// The subgroup generated by a finite set `M`.
///
/// Supported: `G = Z`, `G = Z^d` (canonical Hermite basis), finite `G`
/// (closure), and free `G` when `M` has at most one non-identity element.
pub fn subgroup_generated(g: &GroupDescriptor, m: &[GroupElement]) -> Result<Subgroup> {
    for x in m {
        g.check(x)?;
    }
    let id = g.identity();
    let nontrivial: BTreeSet<GroupElement> = m.iter().filter(|x| **x != id).cloned().collect();
    if nontrivial.is_empty() {
        return Ok(Subgroup::trivial(g));
    }
    match g.kind() {
        GroupKind::Integers | GroupKind::Lattice { .. } => {
            let dim = lattice_dim(g);
            let vectors: Vec<Vec<i64>> = nontrivial.iter().map(as_vector).collect();
            let basis = hermite_normal_form(&vectors, dim);
            let images: Vec<GroupElement> = basis.iter().map(|v| from_vector(g, v)).collect();
            if images.len() == 1 {
                let image = images.into_iter().next().unwrap();
                Ok(Subgroup { ambient: g.clone(), group: GroupDescriptor::integers(), embedding: Embedding::Cyclic { image } })
            } else {
                Ok(Subgroup {
                    ambient: g.clone(),
                    group: GroupDescriptor::lattice(images.len())?,
                    embedding: Embedding::Lattice { images },
                })
            }
        }
        GroupKind::Finite(t) => {
            let mut members: BTreeSet<usize> = BTreeSet::from([t.identity()]);
            let mut stack = vec![t.identity()];
            let gens: Vec<usize> = nontrivial
                .iter()
                .map(|x| match x {
                    GroupElement::Finite(i) => *i,
                    _ => unreachable!(),
                })
                .collect();
            while let Some(x) = stack.pop() {
                for &s in &gens {
                    let y = t.mul(x, s);
                    if members.insert(y) {
                        stack.push(y);
                    }
                }
            }
            let ids: Vec<usize> = members.into_iter().collect();
            let local: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &x)| (x, i)).collect();
            let table = ids
                .iter()
                .map(|&a| ids.iter().map(|&b| local[&t.mul(a, b)]).collect())
                .collect();
            let group = GroupDescriptor::finite(table, local[&t.identity()])?;
            let images = ids.into_iter().map(GroupElement::Finite).collect();
            Ok(Subgroup { ambient: g.clone(), group, embedding: Embedding::Finite { images } })
        }
        GroupKind::Free { .. } => {
            if nontrivial.len() > 1 {
                return Err(Error::Unsupported(
                    "subgroups of free groups generated by two or more elements".into(),
                ));
            }
            let image = nontrivial.into_iter().next().unwrap();
            Ok(Subgroup { ambient: g.clone(), group: GroupDescriptor::integers(), embedding: Embedding::Cyclic { image } })
        }
    }
}

impl Subgroup {
    /// The trivial subgroup, presented as a one-element finite group.
    pub fn trivial(g: &GroupDescriptor) -> Self {
        Self {
            ambient: g.clone(),
            group: GroupDescriptor::finite(vec![vec![0]], 0).expect("trivial table"),
            embedding: Embedding::Finite { images: vec![g.identity()] },
        }
    }

    /// `G` as a subgroup of itself; the embedding is the identity map.
    pub fn whole(g: &GroupDescriptor) -> Result<Self> {
        let embedding = match g.kind() {
            GroupKind::Integers => Embedding::Cyclic { image: GroupElement::Int(1) },
            GroupKind::Lattice { .. } => Embedding::Lattice { images: g.generators().to_vec() },
            GroupKind::Finite(t) => Embedding::Finite { images: (0..t.order()).map(GroupElement::Finite).collect() },
            GroupKind::Free { .. } => {
                return Err(Error::Unsupported("a free group as a subgroup of itself".into()))
            }
        };
        Self::from_images(g, g, embedding)
    }

    /// Builds the homomorphism `H -> G` from generator images and certifies
    /// that it is well defined and injective.
    pub fn from_images(ambient: &GroupDescriptor, group: &GroupDescriptor, embedding: Embedding) -> Result<Self> {
        match (&embedding, group.kind()) {
            (Embedding::Cyclic { image }, GroupKind::Integers) => {
                ambient.check(image)?;
                if ambient.is_finite() {
                    return Err(Error::NotInjective("Z has no injective map into a finite group".into()));
                }
                if *image == ambient.identity() {
                    return Err(Error::NotInjective("generator maps to the identity".into()));
                }
            }
            (Embedding::Lattice { images }, GroupKind::Lattice { dim }) => {
                if images.len() != *dim {
                    return Err(Error::NotInjective(format!("expected {dim} images, got {}", images.len())));
                }
                if !matches!(ambient.kind(), GroupKind::Integers | GroupKind::Lattice { .. }) {
                    return Err(Error::Unsupported("lattice embeddings need an abelian lattice target".into()));
                }
                for x in images {
                    ambient.check(x)?;
                }
                let vectors: Vec<Vec<i64>> = images.iter().map(as_vector).collect();
                if rank(&vectors, lattice_dim(ambient)) != *dim {
                    return Err(Error::NotInjective("images are linearly dependent".into()));
                }
            }
            (Embedding::Finite { images }, GroupKind::Finite(t)) => {
                if images.len() != t.order() {
                    return Err(Error::NotInjective(format!(
                        "expected {} images, got {}",
                        t.order(),
                        images.len()
                    )));
                }
                for x in images {
                    ambient.check(x)?;
                }
                for a in 0..t.order() {
                    for b in 0..t.order() {
                        if images[t.mul(a, b)] != ambient.mul(&images[a], &images[b]) {
                            return Err(Error::NotInjective(format!("not a homomorphism at ({a},{b})")));
                        }
                    }
                }
                let distinct: BTreeSet<&GroupElement> = images.iter().collect();
                if distinct.len() != images.len() {
                    return Err(Error::NotInjective("two elements share an image".into()));
                }
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "embedding of {group} via {embedding:?}"
                )))
            }
        }
        Ok(Self { ambient: ambient.clone(), group: group.clone(), embedding })
    }

    pub fn ambient(&self) -> &GroupDescriptor {
        &self.ambient
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    /// Image of an `H`-element in `G`.
    pub fn embed(&self, h: &GroupElement) -> Result<GroupElement> {
        self.group.check(h)?;
        let g = &self.ambient;
        Ok(match (&self.embedding, h) {
            (Embedding::Cyclic { image }, GroupElement::Int(k)) => g.pow(image, *k),
            (Embedding::Lattice { images }, GroupElement::Lattice(c)) => {
                let mut acc = g.identity();
                for (x, &k) in images.iter().zip(c) {
                    acc = g.mul(&acc, &g.pow(x, k));
                }
                acc
            }
            (Embedding::Finite { images }, GroupElement::Finite(i)) => images[*i].clone(),
            _ => unreachable!("checked by group.check"),
        })
    }

    /// The `H`-form of a `G`-element, if it lies in the subgroup.
    pub fn recognize(&self, x: &GroupElement) -> Option<GroupElement> {
        if !self.ambient.contains(x) {
            return None;
        }
        match &self.embedding {
            Embedding::Cyclic { image } => match self.ambient.kind() {
                GroupKind::Free { .. } => word_exponent(image, x).map(GroupElement::Int),
                _ => integer_coordinates(&[as_vector(image)], &as_vector(x)).map(|c| GroupElement::Int(c[0])),
            },
            Embedding::Lattice { images } => {
                let basis: Vec<Vec<i64>> = images.iter().map(as_vector).collect();
                integer_coordinates(&basis, &as_vector(x)).map(GroupElement::Lattice)
            }
            Embedding::Finite { images } => images.iter().position(|y| y == x).map(GroupElement::Finite),
        }
    }
}

fn lattice_dim(g: &GroupDescriptor) -> usize {
    match g.kind() {
        GroupKind::Lattice { dim } => *dim,
        _ => 1,
    }
}

fn as_vector(x: &GroupElement) -> Vec<i64> {
    match x {
        GroupElement::Int(k) => vec![*k],
        GroupElement::Lattice(v) => v.clone(),
        _ => panic!("not a lattice element: {x}"),
    }
}

fn from_vector(g: &GroupDescriptor, v: &[i64]) -> GroupElement {
    match g.kind() {
        GroupKind::Integers => GroupElement::Int(v[0]),
        _ => GroupElement::Lattice(v.to_vec()),
    }
}

/// `k` with `x = w^k` in a free group, if any.
///
/// Writes `w = u c u^-1` with `c` cyclically reduced; then `w^k = u c^k u^-1`
/// is already reduced, so membership is a string comparison.
fn word_exponent(w: &GroupElement, x: &GroupElement) -> Option<i64> {
    let (GroupElement::Word(w), GroupElement::Word(x)) = (w, x) else {
        return None;
    };
    if x.is_empty() {
        return Some(0);
    }
    let mut s = 0;
    while s < w.len() / 2 && w[s] == w[w.len() - 1 - s].inv() {
        s += 1;
    }
    let u = &w[..s];
    let core = &w[s..w.len() - s];
    if core.is_empty() || x.len() < 2 * s || &x[..s] != u {
        return None;
    }
    let u_inv: Vec<Letter> = u.iter().rev().map(|l| l.inv()).collect();
    if x[x.len() - s..] != u_inv[..] {
        return None;
    }
    let mid = &x[s..x.len() - s];
    if mid.is_empty() || mid.len() % core.len() != 0 {
        return None;
    }
    let k = (mid.len() / core.len()) as i64;
    if mid.chunks(core.len()).all(|c| c == core) {
        return Some(k);
    }
    let core_inv: Vec<Letter> = core.iter().rev().map(|l| l.inv()).collect();
    if mid.chunks(core.len()).all(|c| c == &core_inv[..]) {
        return Some(-k);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_gcd_subgroup() {
        let z = GroupDescriptor::integers();
        let h = subgroup_generated(&z, &[GroupElement::Int(4), GroupElement::Int(6)]).unwrap();
        assert_eq!(h.group(), &GroupDescriptor::integers());
        assert_eq!(h.embed(&GroupElement::Int(3)).unwrap(), GroupElement::Int(6));
        assert_eq!(h.recognize(&GroupElement::Int(-8)), Some(GroupElement::Int(-4)));
        assert_eq!(h.recognize(&GroupElement::Int(3)), None);
    }

    #[test]
    fn cyclic_closure_in_finite_group() {
        let z6 = GroupDescriptor::cyclic(6).unwrap();
        let h = subgroup_generated(&z6, &[GroupElement::Finite(2)]).unwrap();
        assert_eq!(h.group().order(), Some(3));
        assert_eq!(h.embed(&GroupElement::Finite(1)).unwrap(), GroupElement::Finite(2));
        assert_eq!(h.recognize(&GroupElement::Finite(4)), Some(GroupElement::Finite(2)));
        assert_eq!(h.recognize(&GroupElement::Finite(3)), None);
        // the relabelled table is Z/3
        assert_eq!(h.group(), &GroupDescriptor::cyclic(3).unwrap());
    }

    #[test]
    fn lattice_canonical_basis() {
        let z2 = GroupDescriptor::lattice(2).unwrap();
        let m = [GroupElement::lattice(&[2, 0]), GroupElement::lattice(&[0, 3])];
        let h = subgroup_generated(&z2, &m).unwrap();
        assert_eq!(h.group(), &GroupDescriptor::lattice(2).unwrap());
        assert_eq!(h.embedding(), &Embedding::Lattice { images: m.to_vec() });
        assert_eq!(h.embed(&GroupElement::lattice(&[1, -1])).unwrap(), GroupElement::lattice(&[2, -3]));
        assert_eq!(h.recognize(&GroupElement::lattice(&[4, 3])), Some(GroupElement::lattice(&[2, 1])));
        assert_eq!(h.recognize(&GroupElement::lattice(&[1, 3])), None);
    }

    #[test]
    fn rank_one_lattice_subgroup_is_cyclic() {
        let z2 = GroupDescriptor::lattice(2).unwrap();
        let h = subgroup_generated(&z2, &[GroupElement::lattice(&[1, 0]), GroupElement::lattice(&[0, 0])]).unwrap();
        assert_eq!(h.group(), &GroupDescriptor::integers());
        assert_eq!(h.embed(&GroupElement::Int(-2)).unwrap(), GroupElement::lattice(&[-2, 0]));
    }

    #[test]
    fn free_cyclic_subgroup_membership() {
        let f2 = GroupDescriptor::free(2).unwrap();
        let w = GroupElement::word("abaB").unwrap();
        let h = subgroup_generated(&f2, &[f2.identity(), w.clone()]).unwrap();
        for k in -3..=3 {
            let x = h.embed(&GroupElement::Int(k)).unwrap();
            assert_eq!(h.recognize(&x), Some(GroupElement::Int(k)), "k={k}");
        }
        assert_eq!(h.recognize(&GroupElement::word("ab").unwrap()), None);

        let conj = GroupElement::word("abA").unwrap();
        let h = subgroup_generated(&f2, &[conj]).unwrap();
        let x = h.embed(&GroupElement::Int(-2)).unwrap();
        assert_eq!(x.to_string(), "aBBA");
        assert_eq!(h.recognize(&x), Some(GroupElement::Int(-2)));
        assert_eq!(h.recognize(&GroupElement::word("aA").unwrap()), Some(GroupElement::Int(0)));
        assert_eq!(h.recognize(&GroupElement::word("aBA").unwrap()), Some(GroupElement::Int(-1)));
        assert_eq!(h.recognize(&GroupElement::word("b").unwrap()), None);
    }

    #[test]
    fn free_with_two_generators_is_unsupported() {
        let f2 = GroupDescriptor::free(2).unwrap();
        let r = subgroup_generated(&f2, &[GroupElement::word("a").unwrap(), GroupElement::word("b").unwrap()]);
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn trivial_memory_gives_trivial_subgroup() {
        let z = GroupDescriptor::integers();
        let h = subgroup_generated(&z, &[GroupElement::Int(0)]).unwrap();
        assert_eq!(h.group().order(), Some(1));
        assert_eq!(h.recognize(&GroupElement::Int(0)), Some(GroupElement::Finite(0)));
    }

    #[test]
    fn injectivity_is_certified() {
        let z = GroupDescriptor::integers();
        let z2 = GroupDescriptor::lattice(2).unwrap();
        let z6 = GroupDescriptor::cyclic(6).unwrap();
        let z3 = GroupDescriptor::cyclic(3).unwrap();
        assert!(Subgroup::from_images(&z2, &z, Embedding::Cyclic { image: GroupElement::lattice(&[1, 0]) }).is_ok());
        assert!(Subgroup::from_images(&z2, &z, Embedding::Cyclic { image: GroupElement::lattice(&[0, 0]) }).is_err());
        assert!(Subgroup::from_images(&z6, &z, Embedding::Cyclic { image: GroupElement::Finite(1) }).is_err());
        let dependent = Embedding::Lattice { images: vec![GroupElement::lattice(&[1, 2]), GroupElement::lattice(&[2, 4])] };
        assert!(matches!(Subgroup::from_images(&z2, &z2, dependent), Err(Error::NotInjective(_))));
        let good = Embedding::Finite { images: vec![GroupElement::Finite(0), GroupElement::Finite(2), GroupElement::Finite(4)] };
        assert!(Subgroup::from_images(&z6, &z3, good).is_ok());
        let not_hom = Embedding::Finite { images: vec![GroupElement::Finite(0), GroupElement::Finite(1), GroupElement::Finite(2)] };
        assert!(Subgroup::from_images(&z6, &z3, not_hom).is_err());
    }

    #[test]
    fn whole_group_is_identity_embedding() {
        let z2 = GroupDescriptor::lattice(2).unwrap();
        let h = Subgroup::whole(&z2).unwrap();
        let x = GroupElement::lattice(&[3, -1]);
        assert_eq!(h.embed(&x).unwrap(), x);
        assert_eq!(h.recognize(&x), Some(x));
    }
}
