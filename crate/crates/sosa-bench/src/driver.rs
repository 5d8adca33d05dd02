//! Runs the experiment grid: trials x algorithms x problems, scheduled
//! over a bounded worker pool. Each trial owns its objective and RNG, so
//! scheduling order can never change results; outputs are ordered by
//! (algorithm, problem, trial) regardless of completion order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{Context, Result};
use sosa_core::{run, OptimizerConfig, TrialRecord};

use crate::config::ExperimentSpec;
use crate::registry;

struct Job {
    algorithm: sosa_core::Algorithm,
    problem: String,
    trial: u32,
}

/// Executes every (algorithm, problem, trial) cell and returns the records
/// in canonical order. Seeds are `base_seed + trial`, shared across
/// algorithms so comparisons are paired.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<TrialRecord>> {
    let mut jobs = Vec::new();
    for algorithm in &spec.algorithms {
        for problem in &spec.problems {
            for trial in 0..spec.trials {
                jobs.push(Job {
                    algorithm: *algorithm,
                    problem: problem.clone(),
                    trial,
                });
            }
        }
    }

    let next = AtomicUsize::new(0);
    let results: Vec<Mutex<Option<Result<TrialRecord>>>> =
        jobs.iter().map(|_| Mutex::new(None)).collect();
    let workers = spec.jobs.min(jobs.len()).max(1);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(idx) else { break };
                let outcome = run_job(spec, job);
                *results[idx].lock().expect("result slot poisoned") = Some(outcome);
            });
        }
    });

    results
        .into_iter()
        .zip(&jobs)
        .map(|(slot, job)| {
            slot.into_inner().expect("result slot poisoned").expect("worker finished").with_context(
                || {
                    format!(
                        "trial {} of {} on {}",
                        job.trial, job.algorithm, job.problem
                    )
                },
            )
        })
        .collect()
}

fn run_job(spec: &ExperimentSpec, job: &Job) -> Result<TrialRecord> {
    let objective = registry::build(&job.problem)?;
    let config = OptimizerConfig::for_dimension(
        job.algorithm,
        objective.dimension(),
        spec.budget,
        spec.base_seed + job.trial as u64,
    );
    let start = Instant::now();
    let mut record = run(&objective, &config)?;
    record.wall_time_s = start.elapsed().as_secs_f64();
    Ok(record)
}
