//! Random candidate generation around the incumbent: coordinate selection,
//! normal perturbations with a sigma ladder, and reflection back into the
//! unit cube.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Standard deviations candidates are drawn from, in unit-cube units.
/// Each perturbed coordinate picks its own ladder rung.
pub const DEFAULT_SIGMA_LADDER: [f64; 5] = [0.2, 0.1, 0.05, 0.025, 0.0125];

/// Redraws allowed before a too-close candidate is replaced by a uniform
/// fallback point.
const MAX_REDRAWS: usize = 10;

/// Duplicate guard radius protecting the RBF system's nonsingularity.
pub fn default_delta_min(d: usize) -> f64 {
    1e-6 * libm::sqrt(d as f64)
}

/// Candidate set size used by the benchmark configuration.
pub fn default_candidate_count(d: usize) -> usize {
    (100 * d).min(5000)
}

/// How a policy decides which coordinates to perturb.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    /// Perturb every coordinate (the LMSRBF behavior).
    AllCoords,
    /// Uniform probability decaying with the evaluation count (DYCORS).
    DycorsDecay,
    /// Uniform probability decaying with the iteration count (DDS).
    DdsDecay,
    /// Per-coordinate probabilities from sensitivity analysis (SO-SA).
    Sensitivity,
}

/// A perturbation policy: per-coordinate selection probabilities plus the
/// sigma ladder perturbations are drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationPolicy {
    pub kind: PolicyKind,
    /// `None` means "all ones" and is only meaningful for `AllCoords`.
    pub probabilities: Option<Vec<f64>>,
    pub sigma_ladder: Vec<f64>,
    pub c1: f64,
}

impl PerturbationPolicy {
    /// Validates the ladder (strictly decreasing, in `(0,1]`) and the
    /// probabilities (each in `[c1, 1]`).
    pub fn new(
        kind: PolicyKind,
        probabilities: Option<Vec<f64>>,
        sigma_ladder: Vec<f64>,
        c1: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&c1) || c1 == 0.0 {
            return Err(Error::InvalidConfig(alloc::format!(
                "c1 must lie in (0, 1], got {c1}"
            )));
        }
        if sigma_ladder.is_empty() {
            return Err(Error::InvalidConfig(alloc::string::String::from(
                "sigma ladder must not be empty",
            )));
        }
        for (i, &s) in sigma_ladder.iter().enumerate() {
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::InvalidConfig(alloc::format!(
                    "sigma ladder value {s} outside (0, 1]"
                )));
            }
            if i > 0 && sigma_ladder[i - 1] <= s {
                return Err(Error::InvalidConfig(alloc::string::String::from(
                    "sigma ladder must be strictly decreasing",
                )));
            }
        }
        if let Some(p) = &probabilities {
            for &v in p {
                if !v.is_finite() || v < c1 - 1e-12 || v > 1.0 + 1e-12 {
                    return Err(Error::InvalidConfig(alloc::format!(
                        "perturbation probability {v} outside [{c1}, 1]"
                    )));
                }
            }
        }
        Ok(PerturbationPolicy {
            kind,
            probabilities,
            sigma_ladder,
            c1,
        })
    }

    /// LMSRBF: every coordinate is perturbed.
    pub fn all_coords(sigma_ladder: Vec<f64>) -> Result<Self> {
        PerturbationPolicy::new(PolicyKind::AllCoords, None, sigma_ladder, 1.0)
    }

    /// SO-SA: sensitivity-derived per-coordinate probabilities.
    pub fn sensitivity(probabilities: Vec<f64>, sigma_ladder: Vec<f64>, c1: f64) -> Result<Self> {
        PerturbationPolicy::new(PolicyKind::Sensitivity, Some(probabilities), sigma_ladder, c1)
    }

    /// DYCORS / DDS: one decayed probability shared by all coordinates,
    /// floored at `c1`.
    pub fn uniform_decay(
        kind: PolicyKind,
        p: f64,
        d: usize,
        sigma_ladder: Vec<f64>,
        c1: f64,
    ) -> Result<Self> {
        let clamped = p.max(c1).min(1.0);
        PerturbationPolicy::new(kind, Some(vec![clamped; d]), sigma_ladder, c1)
    }
}

/// The candidate points of one iteration, with per-candidate perturbation
/// masks, fallback flags and distances to the evaluated set.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    points: Matrix,
    masks: Vec<bool>,
    fallback: Vec<bool>,
    min_dists: Vec<f64>,
    /// Squared distances from each candidate to every evaluated point
    /// (`t x n`), a byproduct of the distance guard. The evaluated set is
    /// also the surrogate's center set, so predictions can reuse these
    /// instead of recomputing the dominant distance pass.
    center_sq_dists: Matrix,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.points.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.cols()
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        self.points.row(i)
    }

    pub fn mask(&self, i: usize) -> &[bool] {
        let d = self.dim();
        &self.masks[i * d..(i + 1) * d]
    }

    /// True when the candidate was replaced by a uniform point after the
    /// distance guard kept rejecting redraws.
    pub fn is_fallback(&self, i: usize) -> bool {
        self.fallback[i]
    }

    /// Euclidean distance from each candidate to its nearest evaluated
    /// point, computed while enforcing the guard.
    pub fn min_dists(&self) -> &[f64] {
        &self.min_dists
    }

    /// Squared distances to the evaluated set, one row per candidate.
    pub fn center_sq_dists(&self) -> &Matrix {
        &self.center_sq_dists
    }

    /// Smallest number of perturbed coordinates over all non-fallback
    /// candidates; the generation invariant keeps this at least 1.
    pub fn min_perturbed_coords(&self) -> usize {
        let d = self.dim();
        (0..self.len())
            .map(|i| self.masks[i * d..(i + 1) * d].iter().filter(|&&b| b).count())
            .min()
            .unwrap_or(0)
    }
}

/// Draws the perturbation mask: coordinate `i` is selected when a uniform
/// draw falls at or below `probabilities[i]`. If nothing gets selected the
/// highest-probability coordinate is forced (ties broken uniformly at
/// random), so at least one coordinate is always perturbed.
pub fn select_coordinates(probabilities: &[f64], rng: &mut impl Rng) -> Vec<bool> {
    let mut mask = vec![false; probabilities.len()];
    let mut any = false;
    for (m, &p) in mask.iter_mut().zip(probabilities) {
        let draw: f64 = rng.gen();
        if draw <= p {
            *m = true;
            any = true;
        }
    }
    if !any {
        let max = probabilities.iter().fold(f64::NEG_INFINITY, |a, &v| a.max(v));
        let ties: Vec<usize> = probabilities
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == max)
            .map(|(i, _)| i)
            .collect();
        mask[ties[rng.gen_range(0..ties.len())]] = true;
    }
    mask
}

/// Perturbs the masked coordinates of `best`: each draws a sigma from the
/// ladder, then a zero-mean normal step. Returns the raw point, before
/// reflection.
pub fn perturb(best: &[f64], mask: &[bool], sigma_ladder: &[f64], rng: &mut impl Rng) -> Vec<f64> {
    debug_assert_eq!(best.len(), mask.len());
    let mut y = best.to_vec();
    for (i, &m) in mask.iter().enumerate() {
        if m {
            let sigma = sigma_ladder[rng.gen_range(0..sigma_ladder.len())];
            let z: f64 = rng.sample(StandardNormal);
            y[i] += sigma * z;
        }
    }
    y
}

/// Folds every coordinate back into `[0,1]` by successive reflection about
/// the violated boundary (a triangle wave of period 2), then clamps the
/// at-most-1-ulp rounding residue.
pub fn reflect_into_cube(y: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(y.len());
    for &v in y {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: "candidate reflection",
            });
        }
        let r = v - 2.0 * libm::floor(v * 0.5);
        let folded = if r > 1.0 { 2.0 - r } else { r };
        out.push(folded.clamp(0.0, 1.0));
    }
    Ok(out)
}

/// Generates one candidate set: for each policy, `count` candidates built
/// by select -> perturb -> reflect. Candidates closer than `delta_min` to
/// any evaluated point are redrawn up to [`MAX_REDRAWS`] times and then
/// replaced by a uniform cube point, flagged as fallback.
pub fn generate(
    best: &[f64],
    policies: &[(PerturbationPolicy, usize)],
    evaluated: &Matrix,
    delta_min: f64,
    rng: &mut impl Rng,
) -> Result<CandidateSet> {
    let d = best.len();
    let total: usize = policies.iter().map(|(_, c)| c).sum();
    if total == 0 {
        return Err(Error::InvalidConfig(alloc::string::String::from(
            "candidate count must be at least 1",
        )));
    }
    let guard_sq = delta_min * delta_min;
    let ones = vec![1.0; d];
    let n = evaluated.rows();

    let mut points = Matrix::with_cols(d);
    let mut masks = Vec::with_capacity(total * d);
    let mut fallback = Vec::with_capacity(total);
    let mut min_dists = Vec::with_capacity(total);
    let mut center_sq_dists = Matrix::with_cols(n);
    let mut row = vec![0.0f64; n];

    for (policy, count) in policies {
        let probs: &[f64] = policy.probabilities.as_deref().unwrap_or(&ones);
        debug_assert_eq!(probs.len(), d);
        for _ in 0..*count {
            let mut accepted = None;
            for _ in 0..=MAX_REDRAWS {
                let mask = select_coordinates(probs, rng);
                let y = reflect_into_cube(&perturb(best, &mask, &policy.sigma_ladder, rng))?;
                let sq = sq_dist_row(&y, evaluated, &mut row);
                if sq >= guard_sq {
                    accepted = Some((y, mask, sq, false));
                    break;
                }
            }
            let (y, mask, sq, is_fallback) = match accepted {
                Some(hit) => hit,
                None => {
                    let y: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
                    let sq = sq_dist_row(&y, evaluated, &mut row);
                    (y, vec![true; d], sq, true)
                }
            };
            points.push_row(&y);
            masks.extend_from_slice(&mask);
            fallback.push(is_fallback);
            min_dists.push(libm::sqrt(sq));
            center_sq_dists.push_row(&row);
        }
    }

    Ok(CandidateSet {
        points,
        masks,
        fallback,
        min_dists,
        center_sq_dists,
    })
}

/// Fills `out` with the squared distances from `point` to every row of
/// `set` and returns their minimum (infinite for an empty set).
fn sq_dist_row(point: &[f64], set: &Matrix, out: &mut [f64]) -> f64 {
    let mut best = f64::INFINITY;
    for (slot, row) in out.iter_mut().zip(set.iter_rows()) {
        let d = crate::linalg::sq_dist(point, row);
        *slot = d;
        if d < best {
            best = d;
        }
    }
    best
}
