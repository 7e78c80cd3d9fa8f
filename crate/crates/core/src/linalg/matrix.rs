use std::fmt;

use super::{AffineSubspace, Fp, Subspace};
use crate::error::{Error, Result};

/// Dense row-major matrix over `GF(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl Matrix {
    pub fn new(field: Fp, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for &x in &data {
            field.check(x)?;
        }
        Ok(Self { field, rows, cols, data })
    }

    /// Builds a matrix from signed integer rows, reducing every entry mod p.
    pub fn from_rows(field: Fp, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&x| field.reduce(x)).collect();
        Ok(Self { field, rows: rows.len(), cols, data })
    }

    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.p();
        }
        m
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.field, self.rows)
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p(), other.field.p()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = f.mul_add(*d, a, b);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix sum of different shapes".into()));
        }
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix { field: f, rows: self.rows, cols: self.cols, data })
    }

    /// In-place `self += other` for equal shapes.
    pub(crate) fn add_assign(&mut self, other: &Matrix) {
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, b);
        }
    }

    pub fn scale(&self, s: u32) -> Matrix {
        let f = self.field;
        Matrix { field: f, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, s)).collect() }
    }

    pub fn neg(&self) -> Matrix {
        let f = self.field;
        Matrix { field: f, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.neg(a)).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// `M v`.
    pub fn apply(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(v).fold(0u32, |acc, (&a, &b)| if a == 0 || b == 0 { acc } else { f.mul_add(acc, a, b) })
            })
            .collect())
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`,
    /// adding to existing entries.
    pub(crate) fn add_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        let f = self.field;
        for r in 0..block.rows {
            for c in 0..block.cols {
                let b = block.get(r, c);
                if b != 0 {
                    let idx = (r0 + r) * self.cols + c0 + c;
                    self.data[idx] = f.add(self.data[idx], b);
                }
            }
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack of different heights".into()));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(Matrix { field: self.field, rows: self.rows, cols, data })
    }

    /// Reduced row echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        Rref { matrix: m, pivots }
    }

    /// Reduces in place, choosing pivots only among the first `limit`
    /// columns. Returns the pivot columns.
    pub(crate) fn rref_in_place(&mut self, limit: usize) -> Vec<usize> {
        let f = self.field;
        let p = f.p();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..limit {
            if prow == self.rows {
                break;
            }
            let Some(found) = (prow..self.rows).find(|&r| self.data[r * cols + col] != 0) else {
                continue;
            };
            if found != prow {
                for c in 0..cols {
                    self.data.swap(found * cols + c, prow * cols + c);
                }
            }
            let lead = self.data[prow * cols + col];
            if lead != 1 {
                let inv = f.inv(lead);
                for c in col..cols {
                    let idx = prow * cols + c;
                    self.data[idx] = f.mul(self.data[idx], inv);
                }
            }
            let (before, rest) = self.data.split_at_mut(prow * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            let eliminate = |row: &mut [u32]| {
                let factor = row[col];
                if factor == 0 {
                    return;
                }
                let neg = p - factor;
                for c in col..cols {
                    let b = pivot_row[c];
                    if b != 0 {
                        row[c] = f.mul_add(row[c], neg, b);
                    }
                }
            };
            before.chunks_mut(cols).for_each(eliminate);
            after.chunks_mut(cols).for_each(eliminate);
            pivots.push(col);
            prow += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Right null space `{ v : M v = 0 }`.
    pub fn kernel(&self) -> Subspace {
        let Rref { matrix, pivots } = self.rref();
        kernel_from_rref(&matrix, &pivots, self.cols)
    }

    /// Column space, as a subspace of the target.
    pub fn column_space(&self) -> Subspace {
        Subspace::span(self.field, self.rows, self.transpose().to_rows()).expect("rows have target length")
    }

    /// Full solution set `{ x : M x = b }`.
    pub fn solve(&self, b: &[u32]) -> Result<AffineSubspace> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        for &x in b {
            self.field.check(x)?;
        }
        let rhs = Matrix { field: self.field, rows: self.rows, cols: 1, data: b.to_vec() };
        let mut aug = self.hstack(&rhs)?;
        let pivots = aug.rref_in_place(self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return Ok(AffineSubspace::empty(self.field, self.cols));
        }
        let mut point = vec![0u32; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            point[pc] = aug.get(r, self.cols);
        }
        AffineSubspace::new(point, kernel_from_rref(&aug, &pivots, self.cols))
    }

    /// `M(S)` for a subspace `S` of the source.
    pub fn image_of_subspace(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient() != self.cols || s.field() != self.field {
            return Err(Error::DimensionMismatch(format!(
                "subspace of {} in {} for a matrix with {} columns",
                s.field(),
                s.ambient(),
                self.cols
            )));
        }
        let images = s.basis().iter().map(|v| self.apply(v)).collect::<Result<Vec<_>>>()?;
        Subspace::span(self.field, self.rows, images)
    }

    /// `M(A)` for an affine subspace `A` of the source.
    pub fn image_of_affine(&self, a: &AffineSubspace) -> Result<AffineSubspace> {
        if a.ambient() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "affine subspace in dimension {} for a matrix with {} columns",
                a.ambient(),
                self.cols
            )));
        }
        match a.parts() {
            None => Ok(AffineSubspace::empty(self.field, self.rows)),
            Some((point, dirs)) => AffineSubspace::new(self.apply(point)?, self.image_of_subspace(dirs)?),
        }
    }

    /// Inverse of a square matrix, if it is invertible.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&Matrix::identity(self.field, n)).ok()?;
        let pivots = aug.rref_in_place(n);
        if pivots.len() != n {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for r in 0..n {
            inv.data[r * n..(r + 1) * n].copy_from_slice(&aug.row(r)[n..]);
        }
        Some(inv)
    }

    /// Submatrix formed by the given rows (in order).
    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix { field: self.field, rows: rows.len(), cols: self.cols, data }
    }
}

/// Null space of the first `cols` columns of a matrix already in reduced
/// echelon form with the given pivots (all below `cols`).
fn kernel_from_rref(matrix: &Matrix, pivots: &[usize], cols: usize) -> Subspace {
    let f = matrix.field;
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let basis: Vec<Vec<u32>> = (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u32; cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(matrix.get(r, free));
            }
            v
        })
        .collect();
    Subspace::span(f, cols, basis).expect("kernel vectors have ambient length")
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}
