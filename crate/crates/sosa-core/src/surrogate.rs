//! Cubic radial basis function interpolant with a linear polynomial tail.
//!
//! The model solves the standard augmented symmetric system
//!
//! ```text
//! | Phi  P | |lambda|   |f|
//! | P^T  0 | |  c   | = |0|
//! ```
//!
//! with `Phi[i][j] = ||x_i - x_j||^3` and `P = [1 | X]`. The system is
//! nonsingular whenever `P` has full column rank and the centers are
//! pairwise distinct; a doubling ridge on `Phi` covers near-duplicate
//! centers, which the candidate generator's distance guard should already
//! have prevented (so `ridge_used > 0` is an anomaly worth logging).

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::domain::EvaluatedPoint;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Initial ridge added to `Phi` when the plain factorization fails.
const RIDGE_START: f64 = 1e-10;
/// Ridge escalation stops here; reaching it means the system is singular
/// for structural reasons (duplicate centers or rank-deficient tail).
const RIDGE_MAX: f64 = 1e6;
/// Relative residual tolerance deciding whether a solve succeeded.
const SOLVE_TOL: f64 = 1e-9;

/// Fitted interpolant `s(x) = sum(lambda_i * ||x - x_i||^3) + c0 + c.x`.
#[derive(Debug, Clone)]
pub struct SurrogateModel {
    centers: Matrix,
    rbf_weights: Vec<f64>,
    tail_weights: Vec<f64>,
    ridge_used: f64,
}

impl SurrogateModel {
    pub fn dim(&self) -> usize {
        self.centers.cols()
    }

    pub fn len(&self) -> usize {
        self.centers.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.rows() == 0
    }

    pub fn centers(&self) -> &Matrix {
        &self.centers
    }

    /// RBF coefficients `lambda`, one per center.
    pub fn rbf_weights(&self) -> &[f64] {
        &self.rbf_weights
    }

    /// Linear tail `(c0, c1, ..., cd)`, constant term first.
    pub fn tail_weights(&self) -> &[f64] {
        &self.tail_weights
    }

    /// Ridge that was required to factor the system; `0.0` in the normal
    /// interpolating case.
    pub fn ridge_used(&self) -> f64 {
        self.ridge_used
    }

    /// Evaluates the interpolant at one unit-cube point.
    pub fn predict(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        let mut s = self.tail_weights[0];
        for (j, &v) in x.iter().enumerate() {
            s += self.tail_weights[j + 1] * v;
        }
        for (row, &lambda) in self.centers.iter_rows().zip(&self.rbf_weights) {
            let r2 = linalg::sq_dist(x, row);
            s += lambda * r2 * libm::sqrt(r2);
        }
        s
    }

    /// Evaluates the interpolant at every row of `xs`.
    pub fn predict_batch(&self, xs: &Matrix) -> Vec<f64> {
        debug_assert_eq!(xs.cols(), self.dim());
        xs.iter_rows().map(|x| self.predict(x)).collect()
    }

    /// [`SurrogateModel::predict_batch`] with the squared distances to the
    /// centers already in hand (one row per point, in center order), as
    /// produced by the candidate generator's distance guard. Equals
    /// `predict_batch` bit for bit; it only skips recomputing distances.
    pub fn predict_batch_from_sq_dists(&self, xs: &Matrix, sq_dists: &Matrix) -> Vec<f64> {
        assert_eq!(xs.rows(), sq_dists.rows());
        assert_eq!(sq_dists.cols(), self.len());
        xs.iter_rows()
            .zip(sq_dists.iter_rows())
            .map(|(x, dists)| {
                let mut s = self.tail_weights[0];
                for (j, &v) in x.iter().enumerate() {
                    s += self.tail_weights[j + 1] * v;
                }
                for (&r2, &lambda) in dists.iter().zip(&self.rbf_weights) {
                    s += lambda * r2 * libm::sqrt(r2);
                }
                s
            })
            .collect()
    }
}

/// Fits the interpolant over all evaluated points.
///
/// Errors with [`Error::SurrogateRank`] when `[1 | X]` is rank-deficient
/// (the caller must add points) and [`Error::NonFiniteData`] when any `f`
/// is NaN or infinite.
pub fn fit(points: &[EvaluatedPoint]) -> Result<SurrogateModel> {
    let n = points.len();
    if n == 0 {
        return Err(Error::InvalidConfig(alloc::string::String::from(
            "cannot fit surrogate on empty history",
        )));
    }
    let d = points[0].x.len();
    if n < d + 1 {
        return Err(Error::SurrogateRank { n, d });
    }
    let mut centers = Matrix::with_cols(d);
    let mut values = Vec::with_capacity(n);
    for (i, p) in points.iter().enumerate() {
        if !p.f.is_finite() {
            return Err(Error::NonFiniteData { index: i });
        }
        centers.push_row(&p.x);
        values.push(p.f);
    }

    let k = n + d + 1;
    let mut base = vec![0.0f64; k * k];
    for i in 0..n {
        let xi = centers.row(i);
        for j in (i + 1)..n {
            let r2 = linalg::sq_dist(xi, centers.row(j));
            let phi = r2 * libm::sqrt(r2);
            base[i * k + j] = phi;
            base[j * k + i] = phi;
        }
        base[i * k + n] = 1.0;
        base[n * k + i] = 1.0;
        for j in 0..d {
            base[i * k + n + 1 + j] = xi[j];
            base[(n + 1 + j) * k + i] = xi[j];
        }
    }
    let mut rhs = vec![0.0f64; k];
    rhs[..n].copy_from_slice(&values);
    let scale = values
        .iter()
        .fold(1.0f64, |acc, &v| acc.max(linalg::abs(v)));
    let tol = SOLVE_TOL * scale;

    let mut ridge = 0.0f64;
    loop {
        if let Some(weights) = try_solve(&base, k, n, ridge, &rhs, tol) {
            let rbf_weights = weights[..n].to_vec();
            let tail_weights = weights[n..].to_vec();
            return Ok(SurrogateModel {
                centers,
                rbf_weights,
                tail_weights,
                ridge_used: ridge,
            });
        }
        ridge = if ridge == 0.0 { RIDGE_START } else { ridge * 2.0 };
        if ridge > RIDGE_MAX {
            // Distinguish a rank-deficient tail from duplicate centers.
            return if tail_rank(&centers) < d + 1 {
                Err(Error::SurrogateRank { n, d })
            } else {
                Err(Error::SingularSystem { ridge })
            };
        }
    }
}

/// One factorization attempt at a given ridge; returns the weights when
/// the refined residual meets `tol`.
fn try_solve(base: &[f64], k: usize, n: usize, ridge: f64, rhs: &[f64], tol: f64) -> Option<Vec<f64>> {
    let mut a = base.to_vec();
    if ridge > 0.0 {
        for i in 0..n {
            a[i * k + i] += ridge;
        }
    }
    let mut lu = a.clone();
    let mut pivots = vec![0usize; k];
    if !linalg::lu_factor(&mut lu, k, &mut pivots) {
        return None;
    }
    let mut w = rhs.to_vec();
    linalg::lu_solve(&lu, k, &pivots, &mut w);
    if !w.iter().all(|v| v.is_finite()) {
        return None;
    }
    // One step of iterative refinement tightens the residual to near
    // machine precision on well-posed systems.
    let mut r = vec![0.0f64; k];
    for i in 0..k {
        let mut s = rhs[i];
        for j in 0..k {
            s -= a[i * k + j] * w[j];
        }
        r[i] = s;
    }
    linalg::lu_solve(&lu, k, &pivots, &mut r);
    for (wi, ri) in w.iter_mut().zip(&r) {
        *wi += ri;
    }
    if !w.iter().all(|v| v.is_finite()) {
        return None;
    }
    if linalg::residual_inf(&a, k, &w, rhs) <= tol {
        Some(w)
    } else {
        None
    }
}

fn tail_rank(centers: &Matrix) -> usize {
    let n = centers.rows();
    let d = centers.cols();
    let aug = DMatrix::from_fn(n, d + 1, |i, j| {
        if j == 0 {
            1.0
        } else {
            centers.get(i, j - 1)
        }
    });
    aug.rank(1e-10)
}
