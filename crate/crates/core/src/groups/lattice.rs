//! Integer lattice helpers: Hermite normal form and exact integer
//! coordinates with respect to a basis.

use num_rational::Ratio;

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Returns the nonzero rows only: pivots strictly move right, are positive,
/// and entries above each pivot lie in `[0, pivot)`. Two generating sets of
/// the same lattice give the same output.
pub fn hermite_normal_form(rows: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut rank = 0;
    for col in 0..dim {
        if rank == m.len() {
            break;
        }
        // Euclid on the column below `rank` until one nonzero entry remains.
        loop {
            let mut best: Option<usize> = None;
            for i in rank..m.len() {
                if m[i][col] != 0 && best.map_or(true, |b| m[i][col].abs() < m[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(rank, b);
            let mut done = true;
            for i in rank + 1..m.len() {
                if m[i][col] != 0 {
                    let q = m[i][col].div_euclid(m[rank][col]);
                    for c in 0..dim {
                        m[i][c] -= q * m[rank][c];
                    }
                    if m[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[rank][col] == 0 {
            continue;
        }
        if m[rank][col] < 0 {
            for c in 0..dim {
                m[rank][c] = -m[rank][c];
            }
        }
        let pivot = m[rank][col];
        for i in 0..rank {
            let q = m[i][col].div_euclid(pivot);
            if q != 0 {
                for c in 0..dim {
                    m[i][c] -= q * m[rank][c];
                }
            }
        }
        rank += 1;
    }
    m.truncate(rank);
    m.into_iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .map(|r| r.into_iter().map(|x| x as i64).collect())
        .collect()
}

/// Rank over the rationals.
pub fn rank(rows: &[Vec<i64>], dim: usize) -> usize {
    hermite_normal_form(rows, dim).len()
}

/// Integer coefficients `c` with `sum_i c_i basis_i = target`, if they exist.
/// `basis` must be linearly independent.
pub fn integer_coordinates(basis: &[Vec<i64>], target: &[i64]) -> Option<Vec<i64>> {
    let r = basis.len();
    let d = target.len();
    // Solve B^T c = target: d equations, r unknowns.
    let mut a: Vec<Vec<Ratio<i128>>> = (0..d)
        .map(|row| {
            let mut v: Vec<Ratio<i128>> =
                (0..r).map(|j| Ratio::from_integer(basis[j][row] as i128)).collect();
            v.push(Ratio::from_integer(target[row] as i128));
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..r {
        let Some(p) = (prow..d).find(|&i| a[i][col] != Ratio::from_integer(0)) else {
            continue;
        };
        a.swap(prow, p);
        let inv = Ratio::from_integer(1) / a[prow][col];
        for c in col..=r {
            a[prow][c] *= inv;
        }
        for i in 0..d {
            if i != prow && a[i][col] != Ratio::from_integer(0) {
                let f = a[i][col];
                for c in col..=r {
                    let delta = f * a[prow][c];
                    a[i][c] -= delta;
                }
            }
        }
        pivots.push(col);
        prow += 1;
    }
    if a[prow..].iter().any(|row| row[r] != Ratio::from_integer(0)) {
        return None;
    }
    let mut coeffs = vec![0i64; r];
    for (i, &col) in pivots.iter().enumerate() {
        let v = a[i][r];
        if !v.is_integer() {
            return None;
        }
        coeffs[col] = i64::try_from(v.to_integer()).ok()?;
    }
    Some(coeffs)
}
