use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Fp;

/// First basis index of block `j`: `(j-1)j/2 + 1`.
pub fn block_start(j: usize) -> usize {
    (j - 1) * j / 2 + 1
}

/// Last basis index of block `j`: `j(j+1)/2`.
pub fn block_end(j: usize) -> usize {
    j * (j + 1) / 2
}

/// The block containing basis index `i >= 1`.
pub fn block_of(i: usize) -> usize {
    assert!(i >= 1, "basis indices start at 1");
    let mut j = ((2.0 * i as f64).sqrt() as usize).max(1);
    while block_end(j) < i {
        j += 1;
    }
    while j > 1 && block_end(j - 1) >= i {
        j -= 1;
    }
    j
}

/// A finite combination `Σ c_i v_i` of the basis vectors `v_1, v_2, ...`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVector {
    entries: BTreeMap<usize, u32>,
}

impl SparseVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `v_i`.
    pub fn basis(i: usize) -> Self {
        Self::from_entries([(i, 1)])
    }

    /// Builds from `(index, scalar)` pairs, dropping zeros. Scalars must be reduced.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (i, c) in entries {
            assert!(i >= 1, "basis indices start at 1");
            if c != 0 {
                map.insert(i, c);
            }
        }
        Self { entries: map }
    }

    /// `v_1 + ... + v_k`.
    pub fn partial_sum(k: usize) -> Self {
        Self::from_entries((1..=k).map(|i| (i, 1)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.entries.get(&i).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.entries.iter().map(|(&i, &c)| (i, c))
    }

    /// Number of nonzero coordinates.
    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn check(&self, field: Fp) -> Result<()> {
        self.entries.values().try_for_each(|&c| field.check(c))
    }

    pub fn add(&self, other: &SparseVector, field: Fp) -> SparseVector {
        self.add_scaled(other, 1 % field.p(), field)
    }

    pub fn sub(&self, other: &SparseVector, field: Fp) -> SparseVector {
        self.add_scaled(other, field.neg(1 % field.p()), field)
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &SparseVector, s: u32, field: Fp) -> SparseVector {
        let mut out = self.entries.clone();
        for (&i, &c) in &other.entries {
            let e = out.entry(i).or_insert(0);
            *e = field.mul_add(*e, s, c);
        }
        out.retain(|_, c| *c != 0);
        SparseVector { entries: out }
    }

    /// `Φ`: `v_i -> 0` at a block start, `v_i -> v_{i-1}` otherwise.
    pub fn phi(&self) -> SparseVector {
        self.phi_pow(1)
    }

    /// `Φ^k`, which kills `v_i` once `i - k` leaves the block of `i`.
    pub fn phi_pow(&self, k: usize) -> SparseVector {
        SparseVector::from_entries(
            self.iter().filter(|&(i, _)| i >= k && i - k >= block_start(block_of(i))).map(|(i, c)| (i - k, c)),
        )
    }

    /// `ψ`: `v_i -> v_{i+1}`.
    pub fn psi(&self) -> SparseVector {
        SparseVector::from_entries(self.iter().map(|(i, c)| (i + 1, c)))
    }

    /// The component in blocks `j <= max_block`.
    pub fn truncate_blocks(&self, max_block: usize) -> SparseVector {
        let end = block_end(max_block);
        SparseVector::from_entries(self.iter().filter(|&(i, _)| i <= end))
    }

    /// The component on `v_1, ..., v_len`.
    pub fn truncate_index(&self, len: usize) -> SparseVector {
        SparseVector::from_entries(self.iter().filter(|&(i, _)| i <= len))
    }

    /// Dense coordinates `1..=len`.
    pub fn to_dense(&self, len: usize) -> Vec<u32> {
        (1..=len).map(|i| self.get(i)).collect()
    }

    pub fn from_dense(v: &[u32]) -> Self {
        Self::from_entries(v.iter().enumerate().map(|(k, &c)| (k + 1, c)))
    }
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> =
            self.iter().map(|(i, c)| if c == 1 { format!("v{i}") } else { format!("{c}·v{i}") }).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Closed-form right tails, valid on cells `n >= start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    /// `x(n) = v_1 + ... + v_{n - start + 1}`.
    PartialSums { start: i64 },
    /// `x(n) = value`.
    Constant { start: i64, value: SparseVector },
}

impl Tail {
    pub fn start(&self) -> i64 {
        match self {
            Tail::PartialSums { start } | Tail::Constant { start, .. } => *start,
        }
    }

    fn value_at(&self, n: i64) -> SparseVector {
        match self {
            Tail::PartialSums { start } => SparseVector::partial_sum((n - start + 1) as usize),
            Tail::Constant { value, .. } => value.clone(),
        }
    }
}

/// A configuration `Z -> V` with finitely many explicit nonzero cells and an
/// optional closed-form right tail.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LazySparseConfig {
    cells: BTreeMap<i64, SparseVector>,
    tail: Option<Tail>,
}

impl LazySparseConfig {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn finite(cells: impl IntoIterator<Item = (i64, SparseVector)>) -> Self {
        let mut map = BTreeMap::new();
        for (n, v) in cells {
            if !v.is_zero() {
                map.insert(n, v);
            }
        }
        Self { cells: map, tail: None }
    }

    /// `v` at cell `n`, zero elsewhere.
    pub fn single(n: i64, v: SparseVector) -> Self {
        Self::finite([(n, v)])
    }

    /// Explicit cells must all lie left of the tail.
    pub fn with_tail(cells: impl IntoIterator<Item = (i64, SparseVector)>, tail: Tail) -> Result<Self> {
        let mut x = Self::finite(cells);
        if x.cells.keys().any(|&n| n >= tail.start()) {
            return Err(Error::InvalidConfiguration("explicit cells overlap the tail".into()));
        }
        x.tail = Some(tail);
        Ok(x)
    }

    pub fn tail(&self) -> Option<&Tail> {
        self.tail.as_ref()
    }

    pub fn cells(&self) -> impl Iterator<Item = (i64, &SparseVector)> {
        self.cells.iter().map(|(&n, v)| (n, v))
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty() && self.tail.is_none()
    }

    pub fn value_at(&self, n: i64) -> SparseVector {
        match &self.tail {
            Some(t) if n >= t.start() => t.value_at(n),
            _ => self.cells.get(&n).cloned().unwrap_or_default(),
        }
    }

    pub fn check(&self, field: Fp) -> Result<()> {
        self.cells.values().try_for_each(|v| v.check(field))?;
        if let Some(Tail::Constant { value, .. }) = &self.tail {
            value.check(field)?;
        }
        Ok(())
    }

    pub(crate) fn require_finite(&self) -> Result<()> {
        if self.tail.is_some() {
            return Err(Error::InvalidConfiguration("operation needs a finitely supported configuration".into()));
        }
        Ok(())
    }

    pub(crate) fn explicit_range(&self) -> Option<(i64, i64)> {
        Some((*self.cells.keys().next()?, *self.cells.keys().next_back()?))
    }
}
