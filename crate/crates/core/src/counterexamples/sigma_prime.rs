use std::collections::BTreeMap;

use super::sparse::{LazySparseConfig, SparseVector, Tail};
use crate::error::{Error, Result};
use crate::linalg::{Fp, Matrix};

/// `σ'(x)(n) = x(n+1) - ψ(x(n))`.
///
/// A partial-sum tail from `n0` maps to the constant tail `v_1` from `n0`;
/// a constant tail `c` maps to the constant tail `c - ψ(c)`.
pub fn sigma_prime_apply(x: &LazySparseConfig, field: Fp) -> Result<LazySparseConfig> {
    x.check(field)?;
    let eval = |n: i64| x.value_at(n + 1).sub(&x.value_at(n).psi(), field);
    let tail_start = x.tail().map(Tail::start);
    let mut cells: BTreeMap<i64, SparseVector> = BTreeMap::new();
    if let Some((lo, hi)) = x.explicit_range() {
        let hi = match tail_start {
            Some(s) => s - 1,
            None => hi,
        };
        for n in lo - 1..=hi {
            cells.insert(n, eval(n));
        }
    }
    match x.tail() {
        None => Ok(LazySparseConfig::finite(cells)),
        Some(tail) => {
            let s = tail.start();
            cells.insert(s - 1, eval(s - 1));
            let value = match tail {
                Tail::PartialSums { .. } => SparseVector::basis(1),
                Tail::Constant { value, .. } => value.sub(&value.psi(), field),
            };
            let cells: Vec<_> = cells.into_iter().filter(|(n, _)| *n < s).collect();
            if value.is_zero() {
                Ok(LazySparseConfig::finite(cells))
            } else {
                LazySparseConfig::with_tail(cells, Tail::Constant { start: s, value })
            }
        }
    }
}

/// `x_F` for the window `[-m, m]`, and the cells where `σ'(x_F) = v_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureWitness {
    pub m: usize,
    /// `x_F(n) = 0` for `n < -m`, `v_1 + ... + v_{n+m+1}` for `n >= -m`.
    pub x: LazySparseConfig,
    /// `(n, σ'(x_F)(n))` for `n` in `[-m, m]`.
    pub values: Vec<(i64, SparseVector)>,
}

impl ClosureWitness {
    /// `σ'(x_F) = v_1` on the whole window and `x_F(-m-1) = 0`.
    pub fn check(&self, field: Fp) -> Result<bool> {
        let image = sigma_prime_apply(&self.x, field)?;
        let m = self.m as i64;
        let c = SparseVector::basis(1);
        Ok(self.x.value_at(-m - 1).is_zero()
            && self.values.len() == 2 * self.m + 1
            && self.values.iter().all(|(n, v)| (-m..=m).contains(n) && *v == c && image.value_at(*n) == c))
    }
}

pub fn sigma_prime_closure_witness(m: usize, field: Fp) -> Result<ClosureWitness> {
    let n0 = -(m as i64);
    let x = LazySparseConfig::with_tail([], Tail::PartialSums { start: n0 })?;
    let image = sigma_prime_apply(&x, field)?;
    let values = (n0..=m as i64).map(|n| (n, image.value_at(n))).collect();
    Ok(ClosureWitness { m, x, values })
}

/// Outcome of solving `σ'(x) = v_1` on cells `0..depth` with every `x(n)`
/// truncated to the coordinates `1..=depth + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcedSupport {
    pub depth: usize,
    pub truncation: usize,
    /// Coordinates of `x(depth)` that take the value 1 in every solution.
    pub forced_ones: Vec<usize>,
    /// Coordinates of `x(depth)` fixed (to any value) in every solution.
    pub determined: Vec<usize>,
    /// Fewest nonzero coordinates of `x(depth)` over all solutions.
    pub min_support: usize,
    /// The canonical solution, cells `0..=depth` in dense coordinates `1..=truncation`.
    pub solution: Vec<Vec<u32>>,
}

impl ForcedSupport {
    /// Re-checks the canonical solution with [`sigma_prime_apply`]: on the
    /// cells `0..depth` the image agrees with `v_1` in the kept coordinates.
    pub fn check_solution(&self, field: Fp) -> Result<bool> {
        let x = LazySparseConfig::finite(
            self.solution.iter().enumerate().map(|(n, v)| (n as i64, SparseVector::from_dense(v))),
        );
        let image = sigma_prime_apply(&x, field)?;
        let c = SparseVector::basis(1);
        Ok(self.solution.len() == self.depth + 1
            && (0..self.depth as i64).all(|n| image.value_at(n).truncate_index(self.truncation) == c))
    }
}

/// Solves the window system and reads off the coordinates of the rightmost
/// cell that every solution shares.
pub fn sigma_prime_forced_support(depth: usize, field: Fp) -> Result<ForcedSupport> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let t = depth + 1;
    let cells = depth + 1;
    let var = |n: usize, coord: usize| n * t + (coord - 1);
    let one = 1 % field.p();
    let neg_one = field.neg(one);
    let mut rows: Vec<(Vec<(usize, u32)>, u32)> = Vec::new();
    for n in 0..depth {
        // x(n+1)_1 = 1, and x(n+1)_s - x(n)_{s-1} = 0 for 2 <= s <= t
        rows.push((vec![(var(n + 1, 1), one)], one));
        for s in 2..=t {
            rows.push((vec![(var(n + 1, s), one), (var(n, s - 1), neg_one)], 0));
        }
    }
    let mut system = Matrix::zeros(field, rows.len(), cells * t);
    let mut rhs = Vec::with_capacity(rows.len());
    for (r, (terms, b)) in rows.iter().enumerate() {
        for &(c, v) in terms {
            system.set(r, c, v);
        }
        rhs.push(*b);
    }
    let solutions = system.solve(&rhs)?;
    let (point, dirs) = solutions
        .parts()
        .ok_or_else(|| Error::InvalidArgument("window system unexpectedly inconsistent".into()))?;
    let last = |coord: usize| var(depth, coord);
    let determined: Vec<usize> =
        (1..=t).filter(|&s| dirs.basis().iter().all(|d| d[last(s)] == 0)).collect();
    let forced_ones: Vec<usize> = determined.iter().copied().filter(|&s| point[last(s)] == one).collect();
    let min_support = determined.iter().filter(|&&s| point[last(s)] != 0).count();
    let solution = (0..cells).map(|n| point[n * t..(n + 1) * t].to_vec()).collect();
    Ok(ForcedSupport { depth, truncation: t, forced_ones, determined, min_support, solution })
}
