//! The stochastic response surface engine: merit scoring over random
//! candidates, the randomized/greedy weight schedule, and the budgeted
//! evaluation loop shared by the SO-SA, LMSRBF and DYCORS variants, plus
//! the surrogate-free DDS loop.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::candidates::{
    self, default_candidate_count, default_delta_min, PerturbationPolicy, PolicyKind,
    DEFAULT_SIGMA_LADDER,
};
use crate::doe::latin_hypercube;
use crate::domain::{EvaluatedPoint, Objective};
use crate::error::{Error, Result};
use crate::linalg::{min_sq_dist, Matrix};
use crate::sensitivity::{SensitivityProfile, SENSITIVITY_DELTA};
use crate::surrogate;
use crate::trial::{RunDiagnostics, TrialRecord};

/// The four algorithm variants, dispatched as configuration over one
/// engine rather than separate implementations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Sensitivity-driven candidate generation over the RBF surrogate.
    Sosa,
    /// Perturb-all-coordinates stochastic RBF search.
    Lmsrbf,
    /// Log-decaying uniform perturbation probability over the surrogate.
    Dycors,
    /// Surrogate-free greedy dynamically dimensioned search.
    Dds,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Sosa,
        Algorithm::Lmsrbf,
        Algorithm::Dycors,
        Algorithm::Dds,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Sosa => "sosa",
            Algorithm::Lmsrbf => "lmsrbf",
            Algorithm::Dycors => "dycors",
            Algorithm::Dds => "dds",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sosa" => Ok(Algorithm::Sosa),
            "lmsrbf" => Ok(Algorithm::Lmsrbf),
            "dycors" => Ok(Algorithm::Dycors),
            "dds" => Ok(Algorithm::Dds),
            other => Err(Error::InvalidConfig(alloc::format!(
                "unknown algorithm '{other}' (expected sosa, lmsrbf, dycors or dds)"
            ))),
        }
    }
}

impl core::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Convex pair weighting the surrogate score against the distance score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeritWeights {
    pub w_s: f64,
    pub w_d: f64,
}

impl MeritWeights {
    /// Builds from the distance weight; the surrogate weight is its
    /// complement so the pair always sums to one.
    pub fn from_wd(w_d: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&w_d));
        MeritWeights {
            w_s: 1.0 - w_d,
            w_d,
        }
    }
}

/// Engine configuration; `for_dimension` fills the benchmark defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub algorithm: Algorithm,
    /// Total evaluation budget, including the initial design.
    pub n_max: usize,
    /// Initial design size.
    pub n0: usize,
    /// Candidates generated per iteration.
    pub t: usize,
    /// Floor on every perturbation probability.
    pub c1: f64,
    /// Relative improvement needed to keep the current merit weights.
    pub improve_threshold: f64,
    pub seed: u64,
    pub sigma_ladder: Vec<f64>,
    /// Duplicate guard radius for candidates.
    pub delta_min: f64,
    /// Sensitivity probe step (SO-SA only).
    pub sensitivity_delta: f64,
}

impl OptimizerConfig {
    /// Benchmark defaults for a `d`-dimensional problem: design size
    /// `2(d+1)`, candidate count `min(100 d, 5000)`, probability floor
    /// `1/d`.
    pub fn for_dimension(algorithm: Algorithm, d: usize, n_max: usize, seed: u64) -> Self {
        OptimizerConfig {
            algorithm,
            n_max,
            n0: 2 * (d + 1),
            t: default_candidate_count(d),
            c1: 1.0 / d as f64,
            improve_threshold: 1e-3,
            seed,
            sigma_ladder: DEFAULT_SIGMA_LADDER.to_vec(),
            delta_min: default_delta_min(d),
            sensitivity_delta: SENSITIVITY_DELTA,
        }
    }

    fn validate(&self, d: usize) -> Result<()> {
        if self.n0 < d + 2 {
            return Err(Error::InvalidConfig(alloc::format!(
                "n0 = {} too small for the design (need >= d + 2 = {})",
                self.n0,
                d + 2
            )));
        }
        if self.n_max < self.n0 {
            return Err(Error::InvalidConfig(alloc::format!(
                "budget n_max = {} below design size n0 = {}",
                self.n_max,
                self.n0
            )));
        }
        if !(self.c1 > 0.0 && self.c1 <= 1.0) {
            return Err(Error::InvalidConfig(alloc::format!(
                "c1 = {} outside (0, 1]",
                self.c1
            )));
        }
        if self.t == 0 {
            return Err(Error::InvalidConfig(String::from(
                "candidate count t must be at least 1",
            )));
        }
        if self.improve_threshold.is_nan() || self.improve_threshold < 0.0 {
            return Err(Error::InvalidConfig(String::from(
                "improve_threshold must be nonnegative",
            )));
        }
        Ok(())
    }
}

/// Mutable run state: evaluation history, incumbent, and the facts the
/// weight schedule needs about the previous iteration.
#[derive(Debug)]
pub struct OptimizerState {
    pub history: Vec<EvaluatedPoint>,
    /// Flat copy of the history's points, kept in sync for distance work.
    evaluated: Matrix,
    pub best_x: Vec<f64>,
    pub best_f: f64,
    pub current_weights: MeritWeights,
    /// `previous best - newest f`; positive on improvement.
    last_improvement: f64,
    /// `max(1, |previous best|)` at the time of the newest evaluation.
    last_scale: f64,
}

impl OptimizerState {
    /// Empty state for a `d`-dimensional run; the first evaluation seeds
    /// the incumbent.
    pub fn new(d: usize) -> Self {
        OptimizerState {
            history: Vec::new(),
            evaluated: Matrix::with_cols(d),
            best_x: Vec::new(),
            best_f: f64::INFINITY,
            current_weights: MeritWeights::from_wd(0.5),
            last_improvement: f64::NEG_INFINITY,
            last_scale: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.history.len()
    }

    pub fn is_empty(&self) -> bool {
        self.history.is_empty()
    }

    pub fn evaluated(&self) -> &Matrix {
        &self.evaluated
    }

    /// Whether the newest evaluation improved the incumbent by more than
    /// `threshold` relative to `max(1, |previous best|)`.
    pub fn last_improved(&self, threshold: f64) -> bool {
        self.last_improvement > threshold * self.last_scale
    }

    fn record(&mut self, x: Vec<f64>, f: f64) {
        let prev_best = self.best_f;
        self.last_improvement = prev_best - f;
        self.last_scale = if self.history.is_empty() {
            1.0
        } else {
            prev_best.abs().max(1.0)
        };
        self.evaluated.push_row(&x);
        // Strict improvement only: ties keep the first incumbent.
        if f < self.best_f {
            self.best_f = f;
            self.best_x = x.clone();
        }
        self.history.push(EvaluatedPoint { x, f });
    }
}

/// Normalizes surrogate values over the candidate set to scores in
/// `[0,1]`; all-equal values score 1 everywhere.
pub fn surrogate_score(values: &[f64]) -> Result<Vec<f64>> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: "surrogate score input",
        });
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == min {
        return Ok(alloc::vec![1.0; values.len()]);
    }
    let span = max - min;
    Ok(values.iter().map(|&v| (v - min) / span).collect())
}

/// Normalizes raw minimum distances into scores in `[0,1]`; remote
/// candidates score low (the distance criterion rewards remoteness).
pub fn distance_score_from_raw(raw: &[f64]) -> Vec<f64> {
    let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let max = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == min {
        return alloc::vec![1.0; raw.len()];
    }
    let span = max - min;
    raw.iter().map(|&v| (max - v) / span).collect()
}

/// Minimum distance of each candidate to the evaluated set, plus the
/// normalized distance scores.
pub fn distance_score(candidates: &Matrix, evaluated: &Matrix) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(evaluated.rows() >= 1);
    let raw: Vec<f64> = candidates
        .iter_rows()
        .map(|c| libm::sqrt(min_sq_dist(c, evaluated)))
        .collect();
    (distance_score_from_raw(&raw), raw)
}

/// Weighted merit from precomputed surrogate values and raw distances;
/// returns the argmin index (smallest index on exact ties) and the merit
/// values.
pub fn select_from_scores(
    surrogate_values: &[f64],
    raw_dists: &[f64],
    weights: MeritWeights,
) -> Result<(usize, Vec<f64>)> {
    debug_assert_eq!(surrogate_values.len(), raw_dists.len());
    let vs = surrogate_score(surrogate_values)?;
    let vd = distance_score_from_raw(raw_dists);
    let merits: Vec<f64> = vs
        .iter()
        .zip(&vd)
        .map(|(&s, &d)| weights.w_s * s + weights.w_d * d)
        .collect();
    let mut best = 0usize;
    for (i, &m) in merits.iter().enumerate() {
        if m < merits[best] {
            best = i;
        }
    }
    Ok((best, merits))
}

/// Scores every candidate and picks the next evaluation point.
pub fn select_next(
    candidates: &Matrix,
    surrogate_values: &[f64],
    evaluated: &Matrix,
    weights: MeritWeights,
) -> Result<(usize, Vec<f64>)> {
    if candidates.is_empty() {
        return Err(Error::InvalidConfig(String::from(
            "cannot select from an empty candidate set",
        )));
    }
    let (_, raw) = distance_score(candidates, evaluated);
    select_from_scores(surrogate_values, &raw, weights)
}

/// Weight schedule: keep the current weights after a significant
/// improvement, otherwise redraw the distance weight uniformly on [0,1].
pub fn next_weights(
    state: &OptimizerState,
    improve_threshold: f64,
    rng: &mut impl Rng,
) -> MeritWeights {
    if state.last_improved(improve_threshold) {
        state.current_weights
    } else {
        MeritWeights::from_wd(rng.gen::<f64>())
    }
}

/// DYCORS perturbation probability at evaluation count `n`:
/// `p0 * (1 - log(n - n0 + 1) / log(n_max - n0))` with `p0 = min(1, 20/d)`.
pub fn dycors_probability(n: usize, n0: usize, n_max: usize, d: usize) -> f64 {
    let p0 = 1.0f64.min(20.0 / d as f64);
    let span = n_max.saturating_sub(n0);
    if span <= 1 {
        return p0;
    }
    let decay = libm::log((n - n0 + 1) as f64) / libm::log(span as f64);
    p0 * (1.0 - decay)
}

/// DDS perturbation probability at iteration `m` of `m_total`:
/// `1 - log(m)/log(m_total)`.
pub fn dds_probability(m: usize, m_total: usize) -> f64 {
    if m_total <= 1 {
        return 1.0;
    }
    1.0 - libm::log(m as f64) / libm::log(m_total as f64)
}

/// Step-size anneal for the perturb-all-coordinates variant. An
/// all-coordinates step has norm ~ sigma * sqrt(d), so without shrinking
/// sigma the incumbent can never be refined below that radius; the
/// classic stochastic-RBF remedy is to halve sigma after a streak of
/// non-improving evaluations.
#[derive(Debug)]
struct SigmaAnneal {
    sigma: f64,
    fail_streak: usize,
}

impl SigmaAnneal {
    /// Consecutive failures before a halving.
    const PATIENCE: usize = 8;
    /// Halvings are capped here (0.2 / 2^6).
    const SIGMA_MIN: f64 = 0.2 / 64.0;

    fn new(sigma: f64) -> Self {
        SigmaAnneal {
            sigma,
            fail_streak: 0,
        }
    }

    fn note(&mut self, improved: bool) {
        if improved {
            self.fail_streak = 0;
        } else {
            self.fail_streak += 1;
            if self.fail_streak >= Self::PATIENCE && self.sigma > Self::SIGMA_MIN {
                self.sigma = (self.sigma * 0.5).max(Self::SIGMA_MIN);
                self.fail_streak = 0;
            }
        }
    }
}

/// Tracks the hygiene minima for one iteration's policies.
fn note_probabilities<'a>(
    diag: &mut RunDiagnostics,
    policies: impl IntoIterator<Item = &'a PerturbationPolicy>,
    c1: f64,
) {
    for policy in policies {
        match &policy.probabilities {
            Some(p) => {
                for &v in p {
                    // Convergence precondition: probabilities stay in [c1, 1].
                    assert!(
                        v >= c1 - 1e-12 && v <= 1.0 + 1e-12,
                        "perturbation probability {v} escaped [{c1}, 1]"
                    );
                    if v < diag.min_probability {
                        diag.min_probability = v;
                    }
                }
            }
            None => diag.min_probability = diag.min_probability.min(1.0),
        }
    }
}

/// Runs the configured variant for exactly `n_max` objective evaluations
/// and returns the full progress record.
pub fn run(objective: &Objective, config: &OptimizerConfig) -> Result<TrialRecord> {
    let d = objective.dimension();
    config.validate(d)?;
    if config.algorithm == Algorithm::Dds {
        return run_dds(objective, config);
    }
    let start_calls = objective.eval_count();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut diag = RunDiagnostics::default();
    let mut curve = Vec::with_capacity(config.n_max);
    let mut state = evaluate_design(objective, config, &mut rng, &mut curve)?;
    let mut anneal = SigmaAnneal::new(config.sigma_ladder[0]);

    while state.len() < config.n_max {
        let model = match surrogate::fit(&state.history) {
            Ok(m) => m,
            Err(Error::SurrogateRank { .. }) => {
                // One uniform exploration point restores the tail rank,
                // then the fit is retried on the next pass.
                let x: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
                let f = objective.evaluate_unit(&x)?;
                state.record(x, f);
                curve.push(state.best_f);
                continue;
            }
            Err(e) => return Err(e),
        };
        if model.ridge_used() > 0.0 {
            diag.ridge_events += 1;
        }

        let ladder = config.sigma_ladder.clone();
        let policies: Vec<(PerturbationPolicy, usize)> = match config.algorithm {
            Algorithm::Sosa => {
                let profile = SensitivityProfile::compute(
                    &model,
                    &state.best_x,
                    config.sensitivity_delta,
                    config.c1,
                );
                // The sensitivity probabilities ride the same global-to-local
                // decay the coordinate-count neighborhood scheme prescribes;
                // without it the search never narrows on plateaued objectives
                // where the surrogate's sensitivity profile stays diffuse.
                let decay = dycors_probability(state.len(), config.n0, config.n_max, d);
                let scaled = |p: Vec<f64>| -> Vec<f64> {
                    p.into_iter()
                        .map(|v| (decay * v).max(config.c1).min(1.0))
                        .collect()
                };
                let first = config.t / 2;
                let second = config.t - first;
                alloc::vec![
                    (
                        PerturbationPolicy::sensitivity(
                            scaled(profile.p1),
                            ladder.clone(),
                            config.c1,
                        )?,
                        first,
                    ),
                    (
                        PerturbationPolicy::sensitivity(scaled(profile.p2), ladder, config.c1)?,
                        second,
                    ),
                ]
            }
            Algorithm::Lmsrbf => {
                alloc::vec![(
                    PerturbationPolicy::all_coords(alloc::vec![anneal.sigma])?,
                    config.t,
                )]
            }
            Algorithm::Dycors => {
                let p = dycors_probability(state.len(), config.n0, config.n_max, d);
                alloc::vec![(
                    PerturbationPolicy::uniform_decay(
                        PolicyKind::DycorsDecay,
                        p,
                        d,
                        ladder,
                        config.c1,
                    )?,
                    config.t,
                )]
            }
            Algorithm::Dds => unreachable!("dds dispatches to run_dds"),
        };
        note_probabilities(&mut diag, policies.iter().map(|(p, _)| p), config.c1);

        let set = candidates::generate(
            &state.best_x,
            &policies,
            &state.evaluated,
            config.delta_min,
            &mut rng,
        )?;
        let perturbed = set.min_perturbed_coords();
        assert!(perturbed >= 1, "candidate with empty perturbation mask");
        diag.min_perturbed_coords = diag.min_perturbed_coords.min(perturbed);
        diag.fallback_candidates += (0..set.len()).filter(|&i| set.is_fallback(i)).count() as u64;

        let weights = next_weights(&state, config.improve_threshold, &mut rng);
        state.current_weights = weights;

        // History and surrogate centers are the same rows in the same
        // order, so the guard's distance matrix doubles as kernel input.
        let surrogate_values =
            model.predict_batch_from_sq_dists(set.points(), set.center_sq_dists());
        let (idx, _) = select_from_scores(&surrogate_values, set.min_dists(), weights)?;

        let x = set.point(idx).to_vec();
        let f = objective.evaluate_unit(&x)?;
        let improved = f < state.best_f;
        state.record(x, f);
        curve.push(state.best_f);
        if config.algorithm == Algorithm::Lmsrbf {
            anneal.note(improved);
        }
    }

    debug_assert_eq!(objective.eval_count() - start_calls, config.n_max as u64);
    Ok(finish(objective, config, state, curve, diag))
}

/// Surrogate-free greedy loop: one candidate per iteration around the
/// incumbent, coordinate-selection probability decaying as
/// `1 - log(m)/log(M)`, sigma fixed at 0.2, and strict-improvement
/// acceptance.
pub fn run_dds(objective: &Objective, config: &OptimizerConfig) -> Result<TrialRecord> {
    let d = objective.dimension();
    config.validate(d)?;
    let start_calls = objective.eval_count();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut diag = RunDiagnostics::default();
    let mut curve = Vec::with_capacity(config.n_max);
    let mut state = evaluate_design(objective, config, &mut rng, &mut curve)?;

    let m_total = config.n_max - config.n0;
    for m in 1..=m_total {
        let p = dds_probability(m, m_total);
        let policy = PerturbationPolicy::uniform_decay(
            PolicyKind::DdsDecay,
            p,
            d,
            alloc::vec![0.2],
            config.c1,
        )?;
        note_probabilities(&mut diag, [&policy], config.c1);

        let set = candidates::generate(
            &state.best_x,
            &[(policy, 1)],
            &state.evaluated,
            config.delta_min,
            &mut rng,
        )?;
        assert!(set.min_perturbed_coords() >= 1);
        diag.min_perturbed_coords = diag.min_perturbed_coords.min(set.min_perturbed_coords());
        diag.fallback_candidates += set.is_fallback(0) as u64;

        let x = set.point(0).to_vec();
        let f = objective.evaluate_unit(&x)?;
        state.record(x, f);
        curve.push(state.best_f);
    }

    debug_assert_eq!(objective.eval_count() - start_calls, config.n_max as u64);
    Ok(finish(objective, config, state, curve, diag))
}

/// Step 1: evaluate the space-filling design and seed the incumbent.
fn evaluate_design(
    objective: &Objective,
    config: &OptimizerConfig,
    rng: &mut ChaCha8Rng,
    curve: &mut Vec<f64>,
) -> Result<OptimizerState> {
    let d = objective.dimension();
    let design = latin_hypercube(d, config.n0, rng)?;
    let mut state = OptimizerState::new(d);
    for row in design.points().iter_rows() {
        let f = objective.evaluate_unit(row)?;
        state.record(row.to_vec(), f);
        curve.push(state.best_f);
    }
    // The weight schedule starts fresh: the first adaptive iteration
    // always draws, regardless of improvements inside the design.
    state.last_improvement = f64::NEG_INFINITY;
    state.last_scale = 1.0;
    Ok(state)
}

fn finish(
    objective: &Objective,
    config: &OptimizerConfig,
    state: OptimizerState,
    curve: Vec<f64>,
    diagnostics: RunDiagnostics,
) -> TrialRecord {
    TrialRecord {
        algorithm: String::from(config.algorithm.name()),
        problem: String::from(objective.name()),
        seed: config.seed,
        curve,
        final_best_x: objective.domain().denormalize(&state.best_x),
        final_best_f: state.best_f,
        wall_time_s: 0.0,
        diagnostics,
    }
}
