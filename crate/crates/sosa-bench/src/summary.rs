//! Aggregation across trials: mean/std of the final best values and the
//! Q relative-gap metric comparing algorithms per problem.

use std::collections::BTreeMap;

use sosa_core::TrialRecord;

/// Per-(algorithm, problem) aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSummary {
    pub algorithm: String,
    pub problem: String,
    pub trials: usize,
    pub mean_final: f64,
    pub std_final: f64,
    pub q: f64,
    /// True when the per-problem best mean was zero and `q` is an absolute
    /// difference instead of a relative one.
    pub q_absolute: bool,
}

/// Experiment-level aggregate: pair rows plus per-algorithm Q totals.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    /// Sorted by (algorithm, problem).
    pub pairs: Vec<PairSummary>,
    /// Sorted by ascending total (ties by name).
    pub q_totals: Vec<(String, f64)>,
}

/// Per-(algorithm, problem) Q value plus the flag marking an absolute
/// (rather than relative) difference.
pub type QValues = BTreeMap<(String, String), (f64, bool)>;

/// Q values from mean finals: `Q(A,P) = |mean(A,P) - best(P)| / |best(P)|`
/// with `best(P)` the smallest mean over algorithms, plus per-algorithm
/// totals. When `best(P)` is zero the division guard reports the absolute
/// difference and flags it.
pub fn q_metric(finals: &BTreeMap<(String, String), f64>) -> (QValues, Vec<(String, f64)>) {
    let mut best_per_problem: BTreeMap<&String, f64> = BTreeMap::new();
    for ((_, problem), &mean) in finals {
        best_per_problem
            .entry(problem)
            .and_modify(|b| *b = b.min(mean))
            .or_insert(mean);
    }

    let mut q_values = BTreeMap::new();
    let mut totals: BTreeMap<String, f64> = BTreeMap::new();
    for ((algorithm, problem), &mean) in finals {
        let best = best_per_problem[problem];
        let (q, absolute) = if best == 0.0 {
            ((mean - best).abs(), true)
        } else {
            ((mean - best).abs() / best.abs(), false)
        };
        q_values.insert((algorithm.clone(), problem.clone()), (q, absolute));
        *totals.entry(algorithm.clone()).or_insert(0.0) += q;
    }

    let mut q_totals: Vec<(String, f64)> = totals.into_iter().collect();
    q_totals.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    (q_values, q_totals)
}

/// Builds the full summary from trial records.
pub fn summarize(records: &[TrialRecord]) -> Summary {
    let mut groups: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.algorithm.clone(), r.problem.clone()))
            .or_default()
            .push(r.final_best_f);
    }

    let finals: BTreeMap<(String, String), f64> = groups
        .iter()
        .map(|(key, vals)| (key.clone(), mean(vals)))
        .collect();
    let (q_values, q_totals) = q_metric(&finals);

    let pairs = groups
        .into_iter()
        .map(|((algorithm, problem), vals)| {
            let (q, q_absolute) = q_values[&(algorithm.clone(), problem.clone())];
            PairSummary {
                trials: vals.len(),
                mean_final: mean(&vals),
                std_final: sample_std(&vals),
                q,
                q_absolute,
                algorithm,
                problem,
            }
        })
        .collect();

    Summary { pairs, q_totals }
}

fn mean(vals: &[f64]) -> f64 {
    vals.iter().sum::<f64>() / vals.len() as f64
}

/// Sample standard deviation (n - 1); zero for a single trial.
fn sample_std(vals: &[f64]) -> f64 {
    if vals.len() < 2 {
        return 0.0;
    }
    let m = mean(vals);
    let var = vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (vals.len() - 1) as f64;
    var.sqrt()
}
