use super::{Fp, Matrix};
use crate::error::{Error, Result};

/// A linear subspace of `GF(p)^n`, stored by its reduced echelon basis.
///
/// The basis is unique for the subspace, so `==` is set equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Fp,
    ambient: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(field: Fp, ambient: usize, vectors: Vec<Vec<u32>>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {ambient}",
                v.len()
            )));
        }
        let rows = vectors.len();
        let data: Vec<u32> = vectors.into_iter().flatten().collect();
        let mut m = Matrix::new(field, rows, ambient, data)?;
        let pivots = m.rref_in_place(ambient);
        let basis = (0..pivots.len()).map(|r| m.row(r).to_vec()).collect();
        Ok(Self { field, ambient, basis, pivots })
    }

    pub fn zero(field: Fp, ambient: usize) -> Self {
        Self { field, ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: Fp, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Self { field, ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its component along the basis, with pivot coordinates zeroed.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = out[pc];
            if c != 0 {
                let neg = f.neg(c);
                for (o, &b) in out.iter_mut().zip(row) {
                    if b != 0 {
                        *o = f.mul_add(*o, neg, b);
                    }
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        v.len() == self.ambient && self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }

    /// Every member, for small spaces only (`p^dim` vectors).
    pub fn members(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let mut out = vec![vec![0u32; self.ambient]];
        for b in &self.basis {
            let mut next = Vec::with_capacity(out.len() * f.p() as usize);
            for v in &out {
                for c in 0..f.p() {
                    next.push(v.iter().zip(b).map(|(&x, &y)| f.mul_add(x, c, y)).collect());
                }
            }
            out = next;
        }
        out
    }
}

/// An affine subspace of `GF(p)^n`: empty, or `point + directions`.
///
/// The stored point has zero pivot coordinates with respect to the
/// direction basis, which makes it the lexicographically smallest member and
/// makes `==` set equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineSubspace {
    field: Fp,
    ambient: usize,
    parts: Option<(Vec<u32>, Subspace)>,
}

impl AffineSubspace {
    pub fn new(point: Vec<u32>, directions: Subspace) -> Result<Self> {
        if point.len() != directions.ambient() {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for directions in dimension {}",
                point.len(),
                directions.ambient()
            )));
        }
        let point = directions.reduce(&point);
        Ok(Self { field: directions.field(), ambient: directions.ambient(), parts: Some((point, directions)) })
    }

    pub fn empty(field: Fp, ambient: usize) -> Self {
        Self { field, ambient, parts: None }
    }

    pub fn point(field: Fp, v: Vec<u32>) -> Self {
        let ambient = v.len();
        Self { field, ambient, parts: Some((v, Subspace::zero(field, ambient))) }
    }

    pub fn full(field: Fp, ambient: usize) -> Self {
        Self { field, ambient, parts: Some((vec![0; ambient], Subspace::full(field, ambient))) }
    }

    pub fn from_subspace(s: Subspace) -> Self {
        let ambient = s.ambient();
        Self { field: s.field(), ambient, parts: Some((vec![0; ambient], s)) }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_none()
    }

    pub fn parts(&self) -> Option<(&[u32], &Subspace)> {
        self.parts.as_ref().map(|(p, d)| (p.as_slice(), d))
    }

    /// Canonical (lexicographically smallest) member.
    pub fn representative(&self) -> Option<&[u32]> {
        self.parts.as_ref().map(|(p, _)| p.as_slice())
    }

    pub fn directions(&self) -> Option<&Subspace> {
        self.parts.as_ref().map(|(_, d)| d)
    }

    pub fn dim(&self) -> Option<usize> {
        self.directions().map(Subspace::dim)
    }

    pub fn contains(&self, x: &[u32]) -> bool {
        match &self.parts {
            None => false,
            Some((p, d)) => {
                x.len() == self.ambient
                    && d.contains(&x.iter().zip(p).map(|(&a, &b)| self.field.sub(a, b)).collect::<Vec<_>>())
            }
        }
    }

    pub fn is_subset_of(&self, other: &AffineSubspace) -> bool {
        match (&self.parts, &other.parts) {
            (None, _) => self.ambient == other.ambient,
            (Some(_), None) => false,
            (Some((p, d)), Some((_, od))) => other.contains(p) && d.is_subspace_of(od),
        }
    }

    pub fn members(&self) -> Vec<Vec<u32>> {
        match &self.parts {
            None => Vec::new(),
            Some((p, d)) => d
                .members()
                .into_iter()
                .map(|v| v.iter().zip(p).map(|(&a, &b)| self.field.add(a, b)).collect())
                .collect(),
        }
    }
}
