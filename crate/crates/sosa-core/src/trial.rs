//! Per-run output: the progress curve and summary facts one optimizer run
//! produces.

use alloc::string::String;
use alloc::vec::Vec;

/// In-loop hygiene counters collected during a run.
///
/// These back the convergence preconditions (perturbation probabilities
/// bounded away from zero, at least one coordinate perturbed per
/// candidate) with observed minima instead of trust.
#[derive(Debug, Clone, PartialEq)]
pub struct RunDiagnostics {
    /// Smallest perturbation probability used in any iteration.
    pub min_probability: f64,
    /// Smallest number of perturbed coordinates over all candidates.
    pub min_perturbed_coords: usize,
    /// Candidates replaced by uniform fallback points by the distance guard.
    pub fallback_candidates: u64,
    /// Surrogate fits that needed a ridge (anomalous; the distance guard
    /// should prevent near-duplicate centers).
    pub ridge_events: u64,
}

impl Default for RunDiagnostics {
    fn default() -> Self {
        RunDiagnostics {
            min_probability: f64::INFINITY,
            min_perturbed_coords: usize::MAX,
            fallback_candidates: 0,
            ridge_events: 0,
        }
    }
}

/// Full record of one optimizer run on one problem.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub algorithm: String,
    pub problem: String,
    pub seed: u64,
    /// `curve[k]` is the best objective value after `k + 1` evaluations;
    /// the length equals the evaluation budget.
    pub curve: Vec<f64>,
    /// Best point found, in raw (denormalized) domain coordinates.
    pub final_best_x: Vec<f64>,
    pub final_best_f: f64,
    /// Wall-clock seconds, filled in by the driver; the core has no clock.
    pub wall_time_s: f64,
    pub diagnostics: RunDiagnostics,
}

impl TrialRecord {
    /// Best value after the initial design, before any adaptive step.
    pub fn doe_best(&self, n0: usize) -> f64 {
        self.curve[n0 - 1]
    }
}
