use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sosa_bench::{config, driver, emit, summary};

/// Benchmark runner for the SO-SA, LMSRBF, DYCORS and DDS optimizers.
///
/// Runs trials x algorithms x problems, writes progress curves and
/// Q-metric summaries as CSV. Flags override config-file values; the
/// SOSA_OUT_DIR environment variable supplies the default output
/// directory.
#[derive(Debug, Parser)]
#[command(name = "sosa-bench", version, about)]
struct Cli {
    /// Experiment config file (TOML with [experiment], [algorithms],
    /// [problems] sections).
    #[arg(long)]
    config: Option<PathBuf>,

    /// Comma-separated algorithms: sosa, lmsrbf, dycors, dds.
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<String>>,

    /// Comma-separated problems, e.g. ackley30,rastrigin30,schoen35.
    #[arg(long, value_delimiter = ',')]
    problems: Option<Vec<String>>,

    /// Trials per (algorithm, problem) cell.
    #[arg(long)]
    trials: Option<u32>,

    /// Objective evaluations per trial, including the initial design.
    #[arg(long)]
    budget: Option<usize>,

    /// Base RNG seed; trial k uses seed + k.
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory for the CSV files.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Concurrent trials.
    #[arg(long)]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let overrides = config::Overrides {
        algorithms: cli.algorithms,
        problems: cli.problems,
        trials: cli.trials,
        budget: cli.budget,
        seed: cli.seed,
        out: cli.out,
        jobs: cli.jobs,
    };
    let spec = config::resolve(cli.config.as_deref(), &overrides)?;

    eprintln!(
        "running {} algorithm(s) x {} problem(s) x {} trial(s), budget {}, {} job(s)",
        spec.algorithms.len(),
        spec.problems.len(),
        spec.trials,
        spec.budget,
        spec.jobs
    );
    let records = driver::run_experiment(&spec)?;
    let summary = summary::summarize(&records);
    let written = emit::emit_outputs(&records, &summary, &spec.out_dir)?;

    println!("algorithm     problem          trials  mean_final      std_final       q");
    for p in &summary.pairs {
        println!(
            "{:<13} {:<16} {:>6}  {:>14.6} {:>14.6}  {:>10.4}{}",
            p.algorithm,
            p.problem,
            p.trials,
            p.mean_final,
            p.std_final,
            p.q,
            if p.q_absolute { " (absolute)" } else { "" }
        );
    }
    println!();
    for (algorithm, total) in &summary.q_totals {
        println!("Q({algorithm}) = {total:.4}");
    }
    let total_time: f64 = records.iter().map(|r| r.wall_time_s).sum();
    println!(
        "\n{} trial(s) in {:.1}s of worker time; {} file(s) under {}",
        records.len(),
        total_time,
        written.len(),
        spec.out_dir.display()
    );
    Ok(())
}
