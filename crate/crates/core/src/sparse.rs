use std::ops::Range;

use nalgebra::DMatrix;

use crate::scalar::Scalar;

/// Compressed sparse column matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CscMatrix<T: Scalar> {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> CscMatrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CscMatrix {
            nrows,
            ncols,
            col_ptr: vec![0; ncols + 1],
            row_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Build from (row, col, value) triplets. Duplicates are summed; exact zeros dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, T)]) -> Self {
        let mut counts = vec![0usize; ncols + 1];
        for &(r, c, _) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r},{c}) out of bounds");
            counts[c + 1] += 1;
        }
        for j in 0..ncols {
            counts[j + 1] += counts[j];
        }
        let mut next = counts.clone();
        let mut rows = vec![0usize; triplets.len()];
        let mut vals = vec![T::zero(); triplets.len()];
        for &(r, c, v) in triplets {
            let k = next[c];
            rows[k] = r;
            vals[k] = v;
            next[c] += 1;
        }

        let mut col_ptr = Vec::with_capacity(ncols + 1);
        let mut row_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        col_ptr.push(0);
        let mut scratch: Vec<(usize, T)> = Vec::new();
        for j in 0..ncols {
            scratch.clear();
            scratch.extend((counts[j]..counts[j + 1]).map(|k| (rows[k], vals[k])));
            scratch.sort_by_key(|e| e.0);
            let mut k = 0;
            while k < scratch.len() {
                let r = scratch[k].0;
                let mut v = T::zero();
                while k < scratch.len() && scratch[k].0 == r {
                    v += scratch[k].1;
                    k += 1;
                }
                if v != T::zero() {
                    row_idx.push(r);
                    values.push(v);
                }
            }
            col_ptr.push(row_idx.len());
        }
        CscMatrix {
            nrows,
            ncols,
            col_ptr,
            row_idx,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Row indices and values of column `j`.
    pub fn column(&self, j: usize) -> (&[usize], &[T]) {
        let r = self.col_ptr[j]..self.col_ptr[j + 1];
        (&self.row_idx[r.clone()], &self.values[r])
    }

    pub fn triplets(&self) -> Vec<(usize, usize, T)> {
        let mut out = Vec::with_capacity(self.nnz());
        for j in 0..self.ncols {
            let (rows, vals) = self.column(j);
            out.extend(rows.iter().zip(vals).map(|(&r, &v)| (r, j, v)));
        }
        out
    }

    pub fn transpose(&self) -> CscMatrix<T> {
        let t: Vec<_> = self.triplets().into_iter().map(|(r, c, v)| (c, r, v)).collect();
        CscMatrix::from_triplets(self.ncols, self.nrows, &t)
    }

    /// `y += alpha * A[:, cols] * x` where `x` is indexed relative to `cols.start`.
    pub fn gemv_cols(&self, cols: Range<usize>, alpha: T, x: &[T], y: &mut [T]) {
        debug_assert_eq!(x.len(), cols.len());
        debug_assert_eq!(y.len(), self.nrows);
        for (j, &xj) in cols.zip(x) {
            if xj == T::zero() {
                continue;
            }
            let s = alpha * xj;
            let (rows, vals) = self.column(j);
            for (&r, &v) in rows.iter().zip(vals) {
                y[r] += s * v;
            }
        }
    }

    /// `out = alpha * A[:, cols]^T * y + beta * out`, `out` relative to `cols.start`.
    pub fn gemv_t_cols(&self, cols: Range<usize>, alpha: T, y: &[T], beta: T, out: &mut [T]) {
        debug_assert_eq!(out.len(), cols.len());
        debug_assert_eq!(y.len(), self.nrows);
        for (j, o) in cols.zip(out.iter_mut()) {
            let (rows, vals) = self.column(j);
            let mut acc = T::zero();
            for (&r, &v) in rows.iter().zip(vals) {
                acc += v * y[r];
            }
            *o = alpha * acc + beta * *o;
        }
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.nrows];
        self.gemv_cols(0..self.ncols, T::one(), x, &mut y);
        y
    }

    /// `A^T y`.
    pub fn mul_t_vec(&self, y: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.ncols];
        self.gemv_t_cols(0..self.ncols, T::one(), y, T::zero(), &mut out);
        out
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            m[(r, c)] += v;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_and_multiply() {
        let a = CscMatrix::from_triplets(
            2,
            3,
            &[(0, 0, 1.0), (1, 2, 2.0), (0, 0, 3.0), (1, 1, 0.0), (1, 0, -1.0)],
        );
        assert_eq!(a.nnz(), 3);
        assert_eq!(a.mul_vec(&[1.0, 1.0, 1.0]), vec![4.0, 1.0]);
        assert_eq!(a.mul_t_vec(&[1.0, 2.0]), vec![2.0, 0.0, 4.0]);
        assert_eq!(a.transpose().transpose(), a);
        let d = a.to_dense();
        assert_eq!(d[(0, 0)], 4.0);
        assert_eq!(d[(1, 2)], 2.0);
    }

    #[test]
    fn column_ranges() {
        let a = CscMatrix::from_triplets(2, 3, &[(0, 0, 1.0), (1, 1, 2.0), (0, 2, 5.0)]);
        let mut y = vec![0.0; 2];
        a.gemv_cols(1..3, 1.0, &[1.0, 1.0], &mut y);
        assert_eq!(y, vec![5.0, 2.0]);
        let mut out = vec![1.0, 1.0];
        a.gemv_t_cols(1..3, 2.0, &[1.0, 1.0], 1.0, &mut out);
        assert_eq!(out, vec![5.0, 11.0]);
    }
}
