//! Row-major dense matrix storage and the pivoted LU solver used for the
//! augmented RBF system.
//!
//! The matrices handled here are modest (at most a few hundred rows) but the
//! solver sits on the optimizer's critical path, so the elimination loop is
//! written over contiguous rows to keep it auto-vectorizable.

use alloc::vec;
use alloc::vec::Vec;

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds from row-major data; `data.len()` must equal `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    /// An empty matrix with a fixed column count, ready for `push_row`.
    pub fn with_cols(cols: usize) -> Self {
        Matrix {
            rows: 0,
            cols,
            data: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }
}

/// Squared Euclidean distance between two equal-length slices.
///
/// Four independent accumulators so the reduction vectorizes without
/// relying on float reassociation.
#[inline]
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let ra = ca.remainder();
    let rb = cb.remainder();
    for (qa, qb) in ca.zip(cb) {
        for k in 0..4 {
            let d = qa[k] - qb[k];
            acc[k] += d * d;
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ra.iter().zip(rb) {
        let d = x - y;
        s += d * d;
    }
    s
}

/// Euclidean distance.
#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(sq_dist(a, b))
}

/// Minimum squared distance from `point` to any row of `set`.
///
/// Returns `f64::INFINITY` for an empty set.
#[inline]
pub fn min_sq_dist(point: &[f64], set: &Matrix) -> f64 {
    let mut best = f64::INFINITY;
    for row in set.iter_rows() {
        let d = sq_dist(point, row);
        if d < best {
            best = d;
        }
    }
    best
}

/// LU factorization with partial pivoting, in place over a flat row-major
/// `n x n` buffer. `pivots[k]` records the row swapped into position `k`.
///
/// Returns `false` when a pivot is exactly zero (structurally singular).
pub fn lu_factor(a: &mut [f64], n: usize, pivots: &mut [usize]) -> bool {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(pivots.len(), n);
    for (k, pivot_slot) in pivots.iter_mut().enumerate() {
        let mut p = k;
        let mut max = abs(a[k * n + k]);
        for i in (k + 1)..n {
            let v = abs(a[i * n + k]);
            if v > max {
                max = v;
                p = i;
            }
        }
        if max == 0.0 {
            return false;
        }
        *pivot_slot = p;
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
        }
        let pivot = a[k * n + k];
        let (head, tail) = a.split_at_mut((k + 1) * n);
        let row_k = &head[k * n + k + 1..(k + 1) * n];
        for row in tail.chunks_exact_mut(n) {
            let l = row[k] / pivot;
            row[k] = l;
            if l != 0.0 {
                for (aij, akj) in row[k + 1..].iter_mut().zip(row_k) {
                    *aij -= l * akj;
                }
            }
        }
    }
    true
}

/// Solves `A x = b` using factors from [`lu_factor`]; `b` is overwritten
/// with the solution.
pub fn lu_solve(lu: &[f64], n: usize, pivots: &[usize], b: &mut [f64]) {
    debug_assert_eq!(b.len(), n);
    for (k, &p) in pivots.iter().enumerate() {
        b.swap(k, p);
    }
    // Forward substitution with implicit unit diagonal.
    for i in 1..n {
        let mut s = b[i];
        for j in 0..i {
            s -= lu[i * n + j] * b[j];
        }
        b[i] = s;
    }
    // Back substitution.
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in (i + 1)..n {
            s -= lu[i * n + j] * b[j];
        }
        b[i] = s / lu[i * n + i];
    }
}

/// Residual `b - A x` in the infinity norm, for the solve quality check.
pub fn residual_inf(a: &[f64], n: usize, x: &[f64], b: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n {
        let mut s = b[i];
        for j in 0..n {
            s -= a[i * n + j] * x[j];
        }
        let r = abs(s);
        if r > worst {
            worst = r;
        }
    }
    worst
}

#[inline]
pub fn abs(x: f64) -> f64 {
    f64::from_bits(x.to_bits() & (u64::MAX >> 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn sq_dist_matches_naive() {
        let a = [0.1, 0.9, 0.4, 0.2, 0.7, 0.05, 0.33];
        let b = [0.5, 0.1, 0.6, 0.8, 0.2, 0.95, 0.21];
        let naive: f64 = a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum();
        assert!((sq_dist(&a, &b) - naive).abs() < 1e-15);
    }

    #[test]
    fn lu_solves_small_system() {
        // A = [[2,1],[1,3]], b = [3,5] -> x = [4/5, 7/5]
        let mut a = vec![2.0, 1.0, 1.0, 3.0];
        let mut piv = vec![0usize; 2];
        assert!(lu_factor(&mut a, 2, &mut piv));
        let mut b = vec![3.0, 5.0];
        lu_solve(&a, 2, &piv, &mut b);
        assert!((b[0] - 0.8).abs() < 1e-14);
        assert!((b[1] - 1.4).abs() < 1e-14);
    }

    #[test]
    fn lu_detects_singular() {
        let mut a = vec![1.0, 2.0, 2.0, 4.0];
        let mut piv = vec![0usize; 2];
        assert!(!lu_factor(&mut a, 2, &mut piv));
    }

    #[test]
    fn min_sq_dist_empty_is_infinite() {
        let set = Matrix::with_cols(3);
        assert_eq!(min_sq_dist(&[0.0, 0.0, 0.0], &set), f64::INFINITY);
    }
}
