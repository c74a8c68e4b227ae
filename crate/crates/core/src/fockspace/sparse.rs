//! Compressed-row real matrices acting on a Fock basis.

use nalgebra::DMatrix;
use serde::Serialize;

/// A real square matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
    /// Set when the matrix was checked (or constructed) to be symmetric.
    pub hermitian: bool,
    /// Set when the matrix maps each excitation sector into itself.
    pub block_diagonal: bool,
}

impl SparseOperator {
    /// Assemble from `(row, col, value)` triplets; duplicates are added.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last = None;
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "entry ({r}, {c}) outside a {dim}x{dim} matrix");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let mut op = Self { dim, row_ptr, cols, values, hermitian: false, block_diagonal: false };
        op.prune();
        op
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut op = Self::from_triplets(d.len(), d.iter().enumerate().map(|(i, v)| (i, i, *v)).collect());
        op.hermitian = true;
        op
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_triplets(dim, Vec::new())
    }

    /// Keep every exactly nonzero entry of a dense matrix.
    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        let mut t = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)] != 0.0 {
                    t.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::from_triplets(m.nrows(), t)
    }

    fn prune(&mut self) {
        if self.values.iter().all(|v| *v != 0.0) {
            return;
        }
        let mut t = Vec::with_capacity(self.values.len());
        for (r, c, v) in self.iter() {
            if v != 0.0 {
                t.push((r, c, v));
            }
        }
        let (h, b) = (self.hermitian, self.block_diagonal);
        *self = Self::from_triplets(self.dim, t);
        self.hermitian = h;
        self.block_diagonal = b;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterate over stored `(row, col, value)` entries in row order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |r| (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.values[k])))
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let slice = &self.cols[self.row_ptr[r]..self.row_ptr[r + 1]];
        match slice.binary_search(&c) {
            Ok(k) => self.values[self.row_ptr[r] + k],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|r| (self.row_ptr[r]..self.row_ptr[r + 1]).map(|k| self.values[k] * x[self.cols[k]]).sum())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut op = Self::from_triplets(self.dim, self.iter().map(|(r, c, v)| (c, r, v)).collect());
        op.hermitian = self.hermitian;
        op.block_diagonal = self.block_diagonal;
        op
    }

    /// `self * other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut t = Vec::new();
        let mut acc = vec![0.0; self.dim];
        let mut seen = vec![false; self.dim];
        let mut touched = Vec::new();
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let (m, a) = (self.cols[k], self.values[k]);
                for l in other.row_ptr[m]..other.row_ptr[m + 1] {
                    let c = other.cols[l];
                    if !seen[c] {
                        seen[c] = true;
                        touched.push(c);
                    }
                    acc[c] += a * other.values[l];
                }
            }
            touched.sort_unstable();
            for c in touched.drain(..) {
                t.push((r, c, acc[c]));
                acc[c] = 0.0;
                seen[c] = false;
            }
        }
        Self::from_triplets(self.dim, t)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!(self.dim, other.dim);
        let t = self.iter().map(|(r, c, v)| (r, c, a * v)).chain(other.iter().map(|(r, c, v)| (r, c, b * v))).collect();
        Self::from_triplets(self.dim, t)
    }

    pub fn scaled(&self, a: f64) -> Self {
        self.combine(a, &Self::zeros(self.dim), 0.0)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.iter() {
            m[(r, c)] = v;
        }
        m
    }

    /// `max |A_ij - B_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.combine(1.0, other, -1.0).values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |A - A^T|` entrywise.
    pub fn asymmetry(&self) -> f64 {
        self.max_abs_diff(&self.transpose())
    }

    /// `max |A^T A - I|` entrywise.
    pub fn unitarity_defect(&self) -> f64 {
        self.transpose().matmul(self).max_abs_diff(&Self::identity(self.dim))
    }

    /// `max |[A, D]|` for the diagonal operator `D = diag(d)`.
    pub fn commutator_with_diagonal(&self, d: &[f64]) -> f64 {
        self.iter().fold(0.0, |m, (r, c, v)| m.max((v * (d[c] - d[r])).abs()))
    }

    /// `<x, A y>`.
    pub fn expectation(&self, x: &[f64], y: &[f64]) -> f64 {
        self.mul_vec(y).iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_multiply() {
        let a = SparseOperator::from_triplets(2, vec![(0, 1, 1.0), (0, 1, 2.0), (1, 0, 1.0), (1, 1, 0.0)]);
        assert_eq!(a.nnz(), 2);
        assert_eq!(a.get(0, 1), 3.0);
        let b = a.matmul(&a);
        assert_eq!(b.to_dense(), a.to_dense() * a.to_dense());
        assert_eq!(a.mul_vec(&[1.0, 2.0]), vec![6.0, 1.0]);
        assert_eq!(a.asymmetry(), 2.0);
    }

    #[test]
    fn cancellation_is_pruned() {
        let a = SparseOperator::from_triplets(2, vec![(0, 0, 1.0), (0, 1, 1.0)]);
        let b = SparseOperator::from_triplets(2, vec![(0, 0, 1.0), (1, 0, -1.0)]);
        assert_eq!(a.matmul(&b).nnz(), 0);
    }
}
