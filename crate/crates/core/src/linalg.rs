//! Exact dense and sparse linear algebra over Q(zeta_l).
//!
//! Everything here is plain Gaussian elimination with exact field arithmetic;
//! zero entries are skipped so the sparse structures our matrices actually
//! have (bidiagonal module actions, banded intertwiner systems) stay cheap.

use crate::cyclotomic::{Cyc, CycField, Rat};
use num_traits::Zero;

/// Dense matrix over Q(zeta_l), row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Cyc>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: &CycField) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, field: &CycField) -> Matrix {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        field: &CycField,
        mut f: impl FnMut(usize, usize) -> Cyc,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        let _ = field;
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Cyc {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Cyc) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn scale(&self, s: &Cyc, field: &CycField) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| field.mul(a, s)).collect(),
        }
    }

    pub fn scale_rat(&self, s: &Rat) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.scale(s)).collect(),
        }
    }

    /// self * other, skipping zero entries of self.
    pub fn mul(&self, other: &Matrix, field: &CycField) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Matrix::zeros(self.rows, other.cols, field);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = field.mul(a, b);
                    let cur = out.at(r, c).add(&prod);
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Cyc], field: &CycField) -> Vec<Cyc> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![field.zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.at(r, c);
                if a.is_zero() || v[c].is_zero() {
                    continue;
                }
                out[r] = out[r].add(&field.mul(a, &v[c]));
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.at(r, c).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn column(&self, c: usize) -> Vec<Cyc> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn from_columns(cols: &[Vec<Cyc>], nrows: usize, field: &CycField) -> Matrix {
        let mut m = Matrix::zeros(nrows, cols.len(), field);
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows);
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn hstack(&self, other: &Matrix, field: &CycField) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols, field);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.at(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.at(r, c).clone());
            }
        }
        m
    }

    pub fn trace(&self, field: &CycField) -> Cyc {
        assert_eq!(self.rows, self.cols);
        let mut t = field.zero();
        for i in 0..self.rows {
            t = t.add(self.at(i, i));
        }
        t
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, field: &CycField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // Pick the candidate pivot with the fewest nonzero coefficients,
            // which keeps intermediate entries short.
            let mut best: Option<(usize, usize)> = None;
            for r in row..self.rows {
                let v = self.at(r, col);
                if !v.is_zero() {
                    let weight = v.coeffs().iter().filter(|c| !c.is_zero()).count();
                    if best.map(|(_, w)| weight < w).unwrap_or(true) {
                        best = Some((r, weight));
                    }
                }
            }
            let Some((prow, _)) = best else { continue };
            self.swap_rows(row, prow);
            let inv = field
                .inv(self.at(row, col))
                .expect("pivot is nonzero by construction");
            self.scale_row(row, &inv, field);
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.at(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                self.row_axpy(r, row, &factor.neg(), field);
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: &Cyc, field: &CycField) {
        for c in 0..self.cols {
            let v = self.at(r, c);
            if !v.is_zero() {
                let nv = field.mul(v, s);
                self.set(r, c, nv);
            }
        }
    }

    /// row[dst] += s * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, s: &Cyc, field: &CycField) {
        for c in 0..self.cols {
            let v = self.at(src, c);
            if v.is_zero() {
                continue;
            }
            let nv = self.at(dst, c).add(&field.mul(v, s));
            self.set(dst, c, nv);
        }
    }

    pub fn rank(&self, field: &CycField) -> usize {
        let mut m = self.clone();
        m.rref(field).len()
    }

    /// Basis of the null space, returned as matrix columns.
    pub fn kernel(&self, field: &CycField) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut out = Matrix::zeros(self.cols, free.len(), field);
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, field.one());
            for (prow, &pc) in pivots.iter().enumerate() {
                let v = m.at(prow, fc);
                if !v.is_zero() {
                    out.set(pc, k, v.neg());
                }
            }
        }
        out
    }

    /// Solves self * X = rhs (column-wise); None when inconsistent. When the
    /// solution is not unique the free variables are set to zero.
    pub fn solve(&self, rhs: &Matrix, field: &CycField) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let mut aug = self.hstack(rhs, field);
        let pivots = aug.rref(field);
        // Inconsistent if a pivot lands in the rhs block.
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols, field);
        for (prow, &pc) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                let v = aug.at(prow, self.cols + c);
                if !v.is_zero() {
                    x.set(pc, c, v.clone());
                }
            }
        }
        Some(x)
    }

    pub fn inverse(&self, field: &CycField) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&Matrix::identity(n, field), field);
        let pivots = aug.rref(field);
        if pivots.len() != n || pivots.iter().take(n).enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let mut inv = Matrix::zeros(n, n, field);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.at(r, n + c).clone());
            }
        }
        Some(inv)
    }

    /// Canonical basis of the row space: the nonzero rows of the RREF.
    pub fn row_space_basis(&self, field: &CycField) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let mut out = Matrix::zeros(pivots.len(), self.cols, field);
        for r in 0..pivots.len() {
            for c in 0..self.cols {
                out.set(r, c, m.at(r, c).clone());
            }
        }
        out
    }

    /// Canonical basis of the column space, returned as matrix columns.
    pub fn column_space_basis(&self, field: &CycField) -> Matrix {
        self.transpose().row_space_basis(field).transpose()
    }

    /// Matrix power by repeated squaring.
    pub fn pow(&self, mut n: u64, field: &CycField) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.rows, field);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, field);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, field);
            }
        }
        acc
    }
}

/// A sparse linear system row: sorted (column, coefficient) pairs.
pub type SparseRow = Vec<(usize, Cyc)>;

/// Null-space basis of a sparse system by incremental forward elimination.
/// Returns dense kernel vectors of length `ncols`.
pub fn sparse_kernel(rows: Vec<SparseRow>, ncols: usize, field: &CycField) -> Vec<Vec<Cyc>> {
    use std::collections::BTreeMap;
    // leading column -> echelon row (normalized to leading coefficient 1)
    let mut pivrows: BTreeMap<usize, SparseRow> = BTreeMap::new();

    for mut row in rows {
        row.retain(|(_, v)| !v.is_zero());
        loop {
            row.sort_by_key(|(c, _)| *c);
            let Some((lead_col, lead_val)) = row.first().cloned() else {
                break;
            };
            match pivrows.get(&lead_col) {
                Some(piv) => {
                    // row -= lead_val * piv
                    let mut merged: BTreeMap<usize, Cyc> = row.into_iter().collect();
                    for (c, v) in piv {
                        let delta = field.mul(&lead_val, v);
                        let entry = merged.entry(*c).or_insert_with(|| field.zero());
                        *entry = entry.sub(&delta);
                    }
                    row = merged.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                }
                None => {
                    let inv = field.inv(&lead_val).expect("nonzero leading coefficient");
                    let normalized: SparseRow = row
                        .iter()
                        .map(|(c, v)| (*c, field.mul(v, &inv)))
                        .collect();
                    pivrows.insert(lead_col, normalized);
                    break;
                }
            }
        }
    }

    let pivot_cols: std::collections::BTreeSet<usize> = pivrows.keys().copied().collect();
    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|c| !pivot_cols.contains(c)) {
        let mut x = vec![field.zero(); ncols];
        x[free] = field.one();
        // Back-substitute pivot variables from the highest pivot down.
        for (&pc, prow) in pivrows.iter().rev() {
            let mut acc = field.zero();
            for (c, v) in prow {
                if *c > pc && !x[*c].is_zero() {
                    acc = acc.add(&field.mul(v, &x[*c]));
                }
            }
            x[pc] = acc.neg();
        }
        kernel.push(x);
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::FieldConfig;
    use num_bigint::BigInt;
    use std::sync::Arc;

    fn field() -> Arc<CycField> {
        CycField::new(FieldConfig::new(5)).unwrap()
    }

    fn from_i64(field: &CycField, rows: usize, cols: usize, vals: &[i64]) -> Matrix {
        Matrix::from_fn(rows, cols, field, |r, c| field.from_i64(vals[r * cols + c]))
    }

    #[test]
    fn rank_kernel_and_solve() {
        let f = field();
        let a = from_i64(&f, 3, 3, &[1, 2, 3, 2, 4, 6, 1, 1, 1]);
        assert_eq!(a.rank(&f), 2);
        let k = a.kernel(&f);
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k, &f).is_zero());

        let b = from_i64(&f, 2, 2, &[1, 1, 0, 2]);
        let inv = b.inverse(&f).unwrap();
        assert_eq!(b.mul(&inv, &f), Matrix::identity(2, &f));

        let rhs = from_i64(&f, 2, 1, &[3, 4]);
        let x = b.solve(&rhs, &f).unwrap();
        assert_eq!(b.mul(&x, &f), rhs);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let f = field();
        let a = from_i64(&f, 2, 1, &[1, 2]);
        let rhs = from_i64(&f, 2, 1, &[1, 3]);
        assert!(a.solve(&rhs, &f).is_none());
    }

    #[test]
    fn cyclotomic_entries() {
        let f = field();
        let q = f.q_pow(1);
        let mut m = Matrix::identity(2, &f);
        m.set(0, 1, q.clone());
        let inv = m.inverse(&f).unwrap();
        assert_eq!(*inv.at(0, 1), q.neg());
    }

    #[test]
    fn sparse_kernel_matches_dense() {
        let f = field();
        let a = from_i64(&f, 3, 4, &[1, 0, 2, 1, 0, 1, 1, 0, 1, 1, 3, 1]);
        let dense = a.kernel(&f);
        let rows: Vec<SparseRow> = (0..3)
            .map(|r| {
                (0..4)
                    .filter(|&c| !a.at(r, c).is_zero())
                    .map(|c| (c, a.at(r, c).clone()))
                    .collect()
            })
            .collect();
        let sparse = sparse_kernel(rows, 4, &f);
        assert_eq!(sparse.len(), dense.cols());
        for v in &sparse {
            let as_mat = Matrix::from_columns(&[v.clone()], 4, &f);
            assert!(a.mul(&as_mat, &f).is_zero());
        }
    }

    #[test]
    fn row_space_is_canonical() {
        let f = field();
        let two = Rat::from(BigInt::from(2));
        let a = from_i64(&f, 2, 3, &[1, 2, 0, 0, 0, 1]);
        let b = a.scale_rat(&two);
        assert_eq!(a.row_space_basis(&f), b.row_space_basis(&f));
    }
}
