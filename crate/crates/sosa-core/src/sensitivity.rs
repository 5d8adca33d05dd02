//! Local sensitivity analysis on the surrogate around the incumbent, and
//! the mapping from sensitivity indices to per-coordinate perturbation
//! probabilities.
//!
//! Two indices are computed at the incumbent `x`:
//!
//! * `si1[i] = |s(x + D e_i) - s(x - D e_i)|` — univariate central
//!   differences;
//! * `si2` — elementwise absolute value of the eigenvector belonging to
//!   the largest-magnitude eigenvalue of the bivariate perturbation matrix
//!   `L`, whose entry `(i, j)` is the largest absolute surrogate change
//!   over the four sign combinations of perturbing coordinates `i` and `j`
//!   together.
//!
//! Out-of-cube perturbations are clipped to `[0,1]` before evaluation.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::linalg::{abs, Matrix};
use crate::surrogate::SurrogateModel;

/// Step size for sensitivity probes, in unit-cube coordinates. Deliberately
/// coarse: the interest is the larger neighborhood of the incumbent, not
/// the interpolation wiggle right next to it.
pub const SENSITIVITY_DELTA: f64 = 0.05;

/// Relative eigenvalue-magnitude gap under which the leading eigenvector is
/// treated as undefined and the uniform vector is used instead.
const EIGEN_TIE_TOL: f64 = 1e-9;

/// Symmetric nonnegative matrix of largest bivariate perturbation effects.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl PerturbationMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    /// Builds from a full symmetric buffer (row-major `d x d`); used by
    /// tests and by callers that already have a matrix.
    pub fn from_rows(dim: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), dim * dim);
        for i in 0..dim {
            for j in 0..i {
                assert_eq!(data[i * dim + j], data[j * dim + i], "matrix not symmetric");
            }
        }
        PerturbationMatrix { dim, data }
    }
}

/// Per-coordinate sensitivity indices and the perturbation probabilities
/// derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityProfile {
    pub si1: Vec<f64>,
    pub si2: Vec<f64>,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub delta: f64,
    pub center: Vec<f64>,
}

impl SensitivityProfile {
    /// Runs the full analysis at `center`: both indices plus their
    /// probability mappings clamped to `[c1, 1]`.
    pub fn compute(model: &SurrogateModel, center: &[f64], delta: f64, c1: f64) -> Self {
        let si1 = si1_index(model, center, delta);
        let l = perturbation_matrix(model, center, delta);
        let si2 = si2_index(&l);
        let p1 = probabilities(&si1, c1);
        let p2 = probabilities(&si2, c1);
        SensitivityProfile {
            si1,
            si2,
            p1,
            p2,
            delta,
            center: center.to_vec(),
        }
    }
}

#[inline]
fn clamp01(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

fn probe(center: &[f64], shifts: &[(usize, f64)]) -> Vec<f64> {
    let mut x = center.to_vec();
    for &(i, s) in shifts {
        x[i] = clamp01(x[i] + s);
    }
    x
}

/// Univariate central-difference index, one entry per coordinate.
pub fn si1_index(model: &SurrogateModel, center: &[f64], delta: f64) -> Vec<f64> {
    debug_assert!(delta > 0.0);
    let d = center.len();
    let mut batch = Matrix::with_cols(d);
    for i in 0..d {
        batch.push_row(&probe(center, &[(i, delta)]));
        batch.push_row(&probe(center, &[(i, -delta)]));
    }
    let s = model.predict_batch(&batch);
    (0..d).map(|i| abs(s[2 * i] - s[2 * i + 1])).collect()
}

/// Largest absolute surrogate change over univariate (diagonal) and
/// bivariate (off-diagonal) perturbations of size `delta`.
///
/// Uses exactly `1 + 2d + 4*d(d-1)/2` surrogate evaluations, batched.
pub fn perturbation_matrix(model: &SurrogateModel, center: &[f64], delta: f64) -> PerturbationMatrix {
    debug_assert!(delta > 0.0);
    let d = center.len();
    let mut batch = Matrix::with_cols(d);
    batch.push_row(center);
    for i in 0..d {
        batch.push_row(&probe(center, &[(i, delta)]));
        batch.push_row(&probe(center, &[(i, -delta)]));
    }
    for i in 0..d {
        for j in (i + 1)..d {
            for (si, sj) in [(delta, delta), (delta, -delta), (-delta, delta), (-delta, -delta)] {
                batch.push_row(&probe(center, &[(i, si), (j, sj)]));
            }
        }
    }
    let s = model.predict_batch(&batch);
    let s0 = s[0];

    let mut l = PerturbationMatrix {
        dim: d,
        data: vec![0.0; d * d],
    };
    for i in 0..d {
        let plus = abs(s[1 + 2 * i] - s0);
        let minus = abs(s[2 + 2 * i] - s0);
        l.set_sym(i, i, plus.max(minus));
    }
    let mut idx = 1 + 2 * d;
    for i in 0..d {
        for j in (i + 1)..d {
            let mut best = 0.0f64;
            for _ in 0..4 {
                best = best.max(abs(s[idx] - s0));
                idx += 1;
            }
            l.set_sym(i, j, best);
        }
    }
    debug_assert_eq!(idx, s.len());
    l
}

/// Absolute value of the eigenvector for the largest-magnitude eigenvalue,
/// normalized to unit max-norm.
///
/// Degenerate spectra (zero matrix, or a tie between the top two
/// eigenvalue magnitudes) fall back to the uniform all-ones vector: the
/// leading direction is not well defined there, and uniform is the
/// symmetric choice.
pub fn si2_index(l: &PerturbationMatrix) -> Vec<f64> {
    let d = l.dim();
    let m = DMatrix::from_fn(d, d, |i, j| l.get(i, j));
    let eig = m.symmetric_eigen();

    let mut top = 0usize;
    for i in 1..d {
        if abs(eig.eigenvalues[i]) > abs(eig.eigenvalues[top]) {
            top = i;
        }
    }
    let lead = abs(eig.eigenvalues[top]);
    if lead == 0.0 {
        return vec![1.0; d];
    }
    let mut second = 0.0f64;
    for i in 0..d {
        if i != top {
            second = second.max(abs(eig.eigenvalues[i]));
        }
    }
    if d > 1 && (lead - second) < EIGEN_TIE_TOL * lead {
        return vec![1.0; d];
    }

    let col = eig.eigenvectors.column(top);
    let max = col.iter().fold(0.0f64, |a, &v| a.max(abs(v)));
    col.iter().map(|&v| abs(v) / max).collect()
}

/// Maps nonnegative sensitivity indices to perturbation probabilities in
/// `[c1, 1]` by max-normalization: the most sensitive coordinate is always
/// perturbed, and no coordinate drops below the convergence floor `c1`.
pub fn probabilities(si: &[f64], c1: f64) -> Vec<f64> {
    debug_assert!(c1 > 0.0 && c1 <= 1.0);
    let max = si.iter().fold(0.0f64, |a, &v| a.max(v));
    if max == 0.0 {
        return vec![c1; si.len()];
    }
    si.iter().map(|&v| (v / max).max(c1)).collect()
}
