//! Random generators and brute-force oracles shared by the integration tests.
//!
//! The oracles evaluate rules straight from `τ(x)(g) = Σ B_m x(g m)` with
//! plain modular arithmetic, without going through window maps, compose or
//! the solvers under test.

#![allow(dead_code)]

use std::collections::BTreeMap;

use lca_core::{Configuration, Fp, GroupDescriptor, GroupElement, LinearCA, Matrix};
use rand::Rng;

pub fn int(k: i64) -> GroupElement {
    GroupElement::Int(k)
}

pub fn field(p: u64) -> Fp {
    Fp::new(p).unwrap()
}

pub fn random_matrix<R: Rng>(rng: &mut R, f: Fp, dim: usize) -> Matrix {
    let rows: Vec<Vec<i64>> = (0..dim).map(|_| (0..dim).map(|_| rng.gen_range(0..f.p()) as i64).collect()).collect();
    Matrix::from_rows(f, &rows).unwrap()
}

/// A rule over `group` whose memory is a random nonempty subset of `candidates`.
pub fn random_ca<R: Rng>(rng: &mut R, group: &GroupDescriptor, f: Fp, dim: usize, candidates: &[GroupElement]) -> LinearCA {
    let mut memory: Vec<GroupElement> = candidates.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
    if memory.is_empty() {
        memory.push(candidates[rng.gen_range(0..candidates.len())].clone());
    }
    LinearCA::from_blocks(group.clone(), f, dim, memory.into_iter().map(|m| (m, random_matrix(rng, f, dim)))).unwrap()
}

pub fn random_vector<R: Rng>(rng: &mut R, p: u32, dim: usize) -> Vec<u32> {
    (0..dim).map(|_| rng.gen_range(0..p)).collect()
}

/// The rule as `(m, rows of B_m)` pairs.
pub fn rule_data(ca: &LinearCA) -> Vec<(GroupElement, Vec<Vec<u32>>)> {
    ca.rule().iter().map(|(m, b)| (m.clone(), b.to_rows())).collect()
}

fn mat_vec_acc(acc: &mut [u32], b: &[Vec<u32>], v: &[u32], p: u32) {
    for (i, row) in b.iter().enumerate() {
        let s: u64 = row.iter().zip(v).map(|(&a, &c)| a as u64 * c as u64).sum();
        acc[i] = ((acc[i] as u64 + s) % p as u64) as u32;
    }
}

/// `τ(x)` on every cell of `cells` for a finitely supported `x` over `Z`.
pub fn eval_z(ca: &LinearCA, x: &BTreeMap<i64, Vec<u32>>, cells: impl IntoIterator<Item = i64>) -> BTreeMap<i64, Vec<u32>> {
    let p = ca.field().p();
    let data = rule_data(ca);
    let zero = vec![0; ca.dim()];
    cells
        .into_iter()
        .map(|n| {
            let mut acc = vec![0; ca.dim()];
            for (m, b) in &data {
                let GroupElement::Int(k) = m else { panic!("rule over Z expected") };
                mat_vec_acc(&mut acc, b, x.get(&(n + k)).unwrap_or(&zero), p);
            }
            (n, acc)
        })
        .collect()
}

/// `τ(x)` for `x` indexed by element ids of a finite group.
pub fn eval_finite(ca: &LinearCA, x: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let g = ca.group();
    let p = ca.field().p();
    let data = rule_data(ca);
    (0..x.len())
        .map(|gi| {
            let mut acc = vec![0; ca.dim()];
            for (m, b) in &data {
                let GroupElement::Finite(h) = g.multiply(&GroupElement::Finite(gi), m).unwrap() else { unreachable!() };
                mat_vec_acc(&mut acc, b, &x[h], p);
            }
            acc
        })
        .collect()
}

/// Every vector of `GF(p)^len`, in lexicographic order.
pub fn all_vectors(p: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|v| (0..p).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}

/// Every configuration on a finite group of order `order` over `GF(p)^dim`.
pub fn all_finite_configs(p: u32, dim: usize, order: usize) -> Vec<Vec<Vec<u32>>> {
    all_vectors(p, dim * order).into_iter().map(|flat| flat.chunks(dim).map(|c| c.to_vec()).collect()).collect()
}

pub fn finite_config(x: &[Vec<u32>]) -> Configuration {
    Configuration::finite(x[0].len(), x.iter().enumerate().map(|(i, v)| (GroupElement::Finite(i), v.clone()))).unwrap()
}

/// Rank of a dense matrix over `GF(p)` by plain elimination.
pub fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let p64 = p as u64;
    let inv = |a: u32| -> u32 { (1..p).find(|&b| (a as u64 * b as u64) % p64 == 1).unwrap() };
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, piv);
        let s = inv(rows[rank][c]);
        for v in rows[rank].iter_mut() {
            *v = ((*v as u64 * s as u64) % p64) as u32;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let t = rows[r][c] as u64;
                for k in 0..cols {
                    rows[r][k] = ((rows[r][k] as u64 + (p64 - t) * rows[rank][k] as u64) % p64) as u32;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The `|G| dim x |G| dim` matrix of `τ` over a finite group, built from the table.
pub fn full_matrix_oracle(ca: &LinearCA) -> Vec<Vec<u32>> {
    let g = ca.group();
    let order = g.order().unwrap();
    let d = ca.dim();
    let p = ca.field().p();
    let mut m = vec![vec![0u32; order * d]; order * d];
    for (mem, b) in rule_data(ca) {
        for gi in 0..order {
            let GroupElement::Finite(h) = g.multiply(&GroupElement::Finite(gi), &mem).unwrap() else { unreachable!() };
            for i in 0..d {
                for c in 0..d {
                    let e = &mut m[gi * d + i][h * d + c];
                    *e = (*e + b[i][c]) % p;
                }
            }
        }
    }
    m
}

/// Laurent coefficients `k -> c_k` of a scalar rule over `Z`.
pub fn scalar_coeffs(ca: &LinearCA) -> BTreeMap<i64, u32> {
    assert_eq!(ca.dim(), 1);
    rule_data(ca)
        .into_iter()
        .filter(|(_, b)| b[0][0] != 0)
        .map(|(m, b)| {
            let GroupElement::Int(k) = m else { panic!("rule over Z expected") };
            (k, b[0][0])
        })
        .collect()
}

/// Brute-force classification of a scalar rule over `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    /// Inverse rule found: coefficients of `ν` with `ν τ = τ ν = δ_0`.
    Reversible(BTreeMap<i64, u32>),
    /// Nonzero kernel element found, by period (0 for finite support).
    NotInjective { period: usize },
    Undecided,
}

fn convolve(a: &BTreeMap<i64, u32>, b: &BTreeMap<i64, u32>, p: u32) -> BTreeMap<i64, u32> {
    let mut out: BTreeMap<i64, u32> = BTreeMap::new();
    for (&i, &x) in a {
        for (&j, &y) in b {
            let e = out.entry(i + j).or_insert(0);
            *e = (*e + x * y) % p;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Searches inverses with memory in `[-inverse_radius, inverse_radius]`,
/// periodic kernels of period `<= period_bound` and finitely supported
/// kernels with support length `<= support_bound`.
pub fn classify_scalar(
    coeffs: &BTreeMap<i64, u32>,
    p: u32,
    inverse_radius: i64,
    period_bound: usize,
    support_bound: usize,
) -> OracleVerdict {
    let identity: BTreeMap<i64, u32> = [(0, 1)].into_iter().collect();
    let span = (2 * inverse_radius + 1) as usize;
    for values in all_vectors(p, span) {
        let nu: BTreeMap<i64, u32> = values
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (k as i64 - inverse_radius, c))
            .collect();
        if convolve(&nu, coeffs, p) == identity && convolve(coeffs, &nu, p) == identity {
            return OracleVerdict::Reversible(nu);
        }
    }
    for len in 1..=support_bound {
        for x in all_vectors(p, len) {
            if x[0] == 0 || x[len - 1] == 0 {
                continue;
            }
            let xm: BTreeMap<i64, u32> = x.iter().enumerate().map(|(i, &c)| (i as i64, c)).collect();
            // τ(x)(n) = Σ c_k x(n + k): correlation, i.e. convolution with the reflected rule
            let reflected: BTreeMap<i64, u32> = coeffs.iter().map(|(&k, &c)| (-k, c)).collect();
            if convolve(&reflected, &xm, p).is_empty() {
                return OracleVerdict::NotInjective { period: 0 };
            }
        }
    }
    for period in 1..=period_bound {
        for x in all_vectors(p, period) {
            if x.iter().all(|&c| c == 0) {
                continue;
            }
            let zero = (0..period as i64).all(|n| {
                coeffs
                    .iter()
                    .map(|(&k, &c)| c * x[(n + k).rem_euclid(period as i64) as usize])
                    .sum::<u32>()
                    % p
                    == 0
            });
            if zero {
                return OracleVerdict::NotInjective { period };
            }
        }
    }
    OracleVerdict::Undecided
}
