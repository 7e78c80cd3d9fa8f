use std::collections::BTreeMap;

use super::sparse::{block_end, block_of, block_start, LazySparseConfig, SparseVector};
use crate::ca::LinearCA;
use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, GroupElement};
use crate::linalg::{Fp, Matrix};

/// `σ(x)(n) = x(n) - Φ(x(n+1))`.
pub fn sigma_apply(x: &LazySparseConfig, field: Fp) -> Result<LazySparseConfig> {
    x.require_finite()?;
    x.check(field)?;
    let mut out: BTreeMap<i64, SparseVector> = BTreeMap::new();
    for (n, v) in x.cells() {
        let at = out.entry(n).or_default();
        *at = at.add(v, field);
        let left = out.entry(n - 1).or_default();
        *left = left.sub(&v.phi(), field);
    }
    Ok(LazySparseConfig::finite(out))
}

/// `σ^{-1}(x)(n) = Σ_{k<j} Φ^k(x_j(n+k))` on each block `j`.
pub fn sigma_inverse_apply(x: &LazySparseConfig, field: Fp) -> Result<LazySparseConfig> {
    x.require_finite()?;
    x.check(field)?;
    let mut out: BTreeMap<i64, SparseVector> = BTreeMap::new();
    for (n, v) in x.cells() {
        for (i, c) in v.iter() {
            let j = block_of(i);
            let term = SparseVector::from_entries([(i, c)]);
            for k in 0..j {
                let shifted = term.phi_pow(k);
                if shifted.is_zero() {
                    break;
                }
                let at = out.entry(n - k as i64).or_default();
                *at = at.add(&shifted, field);
            }
        }
    }
    Ok(LazySparseConfig::finite(out))
}

/// Two configurations that agree far to the left of cell `j0 - 1` while
/// `σ^{-1}` separates them at cell 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaWitness {
    pub j0: usize,
    pub y: LazySparseConfig,
    pub z: LazySparseConfig,
    /// Cells `-radius..=radius`.
    pub radius: i64,
    /// `σ^{-1}(y)(0)`.
    pub inverse_y_at_0: SparseVector,
    /// `σ^{-1}(z)(0)`.
    pub inverse_z_at_0: SparseVector,
    /// `σ^{-1}(z')(0)` for `z'` carrying `v_{j0(j0-1)/2}` at cell `j0 - 1`;
    /// that index lies in block `j0 - 1`, too short to reach cell 0.
    pub alternative_z_at_0: SparseVector,
}

impl SigmaWitness {
    /// Index `(j0-1)j0/2 + 1` expected for `σ^{-1}(z)(0)`.
    pub fn expected_index(&self) -> usize {
        block_start(self.j0)
    }

    /// Cells of the window left of `j0 - 1`.
    pub fn agreement_cells(&self) -> impl Iterator<Item = i64> {
        -self.radius..=(self.j0 as i64 - 2).min(self.radius)
    }

    /// Recomputes everything from `sigma_inverse_apply`.
    pub fn check(&self, field: Fp) -> Result<bool> {
        let agree = self.agreement_cells().all(|n| self.y.value_at(n) == self.z.value_at(n));
        let iy = sigma_inverse_apply(&self.y, field)?.value_at(0);
        let iz = sigma_inverse_apply(&self.z, field)?.value_at(0);
        Ok(agree
            && iy == self.inverse_y_at_0
            && iz == self.inverse_z_at_0
            && iy.is_zero()
            && iz == SparseVector::basis(self.expected_index()))
    }
}

/// `y = 0` and `z = v_{j0(j0+1)/2}` (top of block `j0`) at cell `j0 - 1`.
pub fn sigma_nonreversibility_witness(j0: usize, radius: usize, field: Fp) -> Result<SigmaWitness> {
    if j0 < 2 {
        return Err(Error::InvalidArgument(format!("j0 = {j0}, need j0 >= 2")));
    }
    if radius < j0 {
        return Err(Error::InvalidArgument(format!("window radius {radius} below j0 = {j0}")));
    }
    let cell = j0 as i64 - 1;
    let y = LazySparseConfig::zero();
    let z = LazySparseConfig::single(cell, SparseVector::basis(block_end(j0)));
    let alt = LazySparseConfig::single(cell, SparseVector::basis(block_end(j0 - 1)));
    Ok(SigmaWitness {
        j0,
        inverse_y_at_0: sigma_inverse_apply(&y, field)?.value_at(0),
        inverse_z_at_0: sigma_inverse_apply(&z, field)?.value_at(0),
        alternative_z_at_0: sigma_inverse_apply(&alt, field)?.value_at(0),
        y,
        z,
        radius: radius as i64,
    })
}

/// `Φ` restricted to blocks `1..=J`, as a matrix on coordinates `v_1..v_{J(J+1)/2}`.
pub fn phi_matrix(max_block: usize, field: Fp) -> Matrix {
    let dim = block_end(max_block);
    let mut m = Matrix::zeros(field, dim, dim);
    for i in 2..=dim {
        if i != block_start(block_of(i)) {
            m.set(i - 2, i - 1, 1 % field.p());
        }
    }
    m
}

fn phi_block(j: usize, field: Fp) -> Matrix {
    let mut m = Matrix::zeros(field, j, j);
    for c in 1..j {
        m.set(c - 1, c, 1 % field.p());
    }
    m
}

/// The finite-dimensional automaton `σ` on blocks `1..=J`: memory `{0, 1}`,
/// blocks `I` and `-Φ`.
pub fn sigma_truncation(max_block: usize, field: Fp) -> Result<LinearCA> {
    let phi = phi_matrix(max_block, field);
    let dim = phi.rows();
    LinearCA::from_blocks(
        GroupDescriptor::integers(),
        field,
        dim,
        [(GroupElement::Int(0), Matrix::identity(field, dim)), (GroupElement::Int(1), phi.neg())],
    )
}

/// Its inverse `Σ_{k<J} Φ^k · shift^k`, with memory `{0, ..., J-1}`.
pub fn sigma_inverse_truncation(max_block: usize, field: Fp) -> Result<LinearCA> {
    let phi = phi_matrix(max_block, field);
    let dim = phi.rows();
    let mut power = Matrix::identity(field, dim);
    let mut blocks = Vec::with_capacity(max_block);
    for k in 0..max_block {
        blocks.push((GroupElement::Int(k as i64), power.clone()));
        power = power.mul(&phi)?;
    }
    LinearCA::from_blocks(GroupDescriptor::integers(), field, dim, blocks)
}

/// `σ_j` on the single block `E_j`: `x(n) - φ_j(x(n+1))`.
pub fn sigma_block_ca(j: usize, field: Fp) -> Result<LinearCA> {
    LinearCA::from_blocks(
        GroupDescriptor::integers(),
        field,
        j,
        [(GroupElement::Int(0), Matrix::identity(field, j)), (GroupElement::Int(1), phi_block(j, field).neg())],
    )
}

/// `ν_j = Σ_{k<j} φ_j^k · shift^k` on the single block `E_j`.
pub fn sigma_block_inverse_ca(j: usize, field: Fp) -> Result<LinearCA> {
    let phi = phi_block(j, field);
    let mut power = Matrix::identity(field, j);
    let mut blocks = Vec::with_capacity(j);
    for k in 0..j {
        blocks.push((GroupElement::Int(k as i64), power.clone()));
        power = power.mul(&phi)?;
    }
    LinearCA::from_blocks(GroupDescriptor::integers(), field, j, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::Configuration;

    fn f2() -> Fp {
        Fp::new(2).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let f = Fp::new(3).unwrap();
        assert!(sigma_apply(&LazySparseConfig::zero(), f).unwrap().is_zero());
        let x = LazySparseConfig::single(1, SparseVector::basis(3));
        let expected = LazySparseConfig::finite([
            (0, SparseVector::from_entries([(2, 2)])),
            (1, SparseVector::basis(3)),
        ]);
        assert_eq!(sigma_apply(&x, f).unwrap(), expected);
        let x = LazySparseConfig::single(1, SparseVector::basis(1));
        assert_eq!(sigma_apply(&x, f).unwrap(), x);
    }

    #[test]
    fn sigma_inverse_examples() {
        let f = f2();
        let x = LazySparseConfig::single(1, SparseVector::basis(3));
        let expected = LazySparseConfig::finite([(0, SparseVector::basis(2)), (1, SparseVector::basis(3))]);
        assert_eq!(sigma_inverse_apply(&x, f).unwrap(), expected);
        assert!(sigma_inverse_apply(&LazySparseConfig::zero(), f).unwrap().is_zero());
    }

    #[test]
    fn witness_examples() {
        let f = f2();
        let w = sigma_nonreversibility_witness(2, 4, f).unwrap();
        assert_eq!(w.z, LazySparseConfig::single(1, SparseVector::basis(3)));
        assert_eq!(w.inverse_z_at_0, SparseVector::basis(2));
        assert!(w.alternative_z_at_0.is_zero());
        assert!(w.check(f).unwrap());

        let w = sigma_nonreversibility_witness(3, 3, f).unwrap();
        assert_eq!(w.z, LazySparseConfig::single(2, SparseVector::basis(6)));
        assert_eq!(w.inverse_z_at_0, SparseVector::basis(4));
        assert!(sigma_apply(&w.y, f).unwrap().is_zero());

        assert!(sigma_nonreversibility_witness(1, 3, f).is_err());
        assert!(sigma_nonreversibility_witness(4, 3, f).is_err());
    }

    #[test]
    fn truncations_are_mutually_inverse() {
        for p in [2, 3] {
            let f = Fp::new(p).unwrap();
            for j in 1..=5 {
                let s = sigma_truncation(j, f).unwrap();
                let nu = sigma_inverse_truncation(j, f).unwrap();
                assert!(s.compose(&nu).unwrap().is_identity());
                assert!(nu.compose(&s).unwrap().is_identity());
                assert!(sigma_block_ca(j, f).unwrap().compose(&sigma_block_inverse_ca(j, f).unwrap()).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn sparse_sigma_matches_truncated_automaton() {
        let f = Fp::new(3).unwrap();
        let big = 4;
        let dim = block_end(big);
        let ca = sigma_truncation(big, f).unwrap();
        let inv = sigma_inverse_truncation(big, f).unwrap();
        let x = LazySparseConfig::finite([
            (-2, SparseVector::from_entries([(3, 1), (9, 2)])),
            (0, SparseVector::from_entries([(1, 2), (6, 1), (10, 1)])),
            (3, SparseVector::from_entries([(5, 1)])),
        ]);
        let to_config = |x: &LazySparseConfig| {
            Configuration::finite(dim, x.cells().map(|(n, v)| (GroupElement::Int(n), v.to_dense(dim)))).unwrap()
        };
        assert_eq!(to_config(&sigma_apply(&x, f).unwrap()), ca.apply_config(&to_config(&x)).unwrap());
        assert_eq!(to_config(&sigma_inverse_apply(&x, f).unwrap()), inv.apply_config(&to_config(&x)).unwrap());
    }
}
