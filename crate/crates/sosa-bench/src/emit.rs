//! Canonical CSV outputs. Every float is serialized with 17 significant
//! digits so parsing the files recovers the in-memory values exactly, and
//! identical inputs always produce identical bytes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use sosa_core::TrialRecord;

use crate::summary::Summary;

pub const CURVES_HEADER: &str = "algorithm,problem,trial,eval_index,best_f";
pub const SUMMARY_HEADER: &str = "algorithm,problem,trials,mean_final,std_final,q";
pub const QTOTALS_HEADER: &str = "algorithm,q_total";
pub const MEAN_CURVE_HEADER: &str = "eval_index,mean_best_f,std_best_f";

/// 17 significant digits: enough to round-trip any f64 exactly.
pub fn fmt_g17(v: f64) -> String {
    format!("{v:.16e}")
}

/// One parsed row of `curves.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub algorithm: String,
    pub problem: String,
    pub trial: u32,
    pub eval_index: u32,
    pub best_f: f64,
}

/// Writes `curves.csv`, `summary.csv`, `qtotals.csv` and one mean/std
/// curve file per (algorithm, problem). Records must already be in
/// canonical (algorithm, problem, trial) order, as the driver returns
/// them. Returns the paths written.
pub fn emit_outputs(records: &[TrialRecord], summary: &Summary, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let mut written = Vec::new();

    let curves_path = out_dir.join("curves.csv");
    {
        let mut w = writer(&curves_path)?;
        writeln!(w, "{CURVES_HEADER}").with_context(|| path_ctx(&curves_path))?;
        let mut trial = 0u32;
        let mut prev_group: Option<(&str, &str)> = None;
        for r in records {
            let group = (r.algorithm.as_str(), r.problem.as_str());
            trial = match prev_group {
                Some(g) if g == group => trial + 1,
                _ => 0,
            };
            prev_group = Some(group);
            for (i, &best) in r.curve.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    r.algorithm,
                    r.problem,
                    trial,
                    i + 1,
                    fmt_g17(best)
                )
                .with_context(|| path_ctx(&curves_path))?;
            }
        }
        w.flush().with_context(|| path_ctx(&curves_path))?;
    }
    written.push(curves_path);

    let summary_path = out_dir.join("summary.csv");
    {
        let mut w = writer(&summary_path)?;
        writeln!(w, "{SUMMARY_HEADER}").with_context(|| path_ctx(&summary_path))?;
        for p in &summary.pairs {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                p.algorithm,
                p.problem,
                p.trials,
                fmt_g17(p.mean_final),
                fmt_g17(p.std_final),
                fmt_g17(p.q)
            )
            .with_context(|| path_ctx(&summary_path))?;
        }
        w.flush().with_context(|| path_ctx(&summary_path))?;
    }
    written.push(summary_path);

    let qtotals_path = out_dir.join("qtotals.csv");
    {
        let mut w = writer(&qtotals_path)?;
        writeln!(w, "{QTOTALS_HEADER}").with_context(|| path_ctx(&qtotals_path))?;
        for (algorithm, total) in &summary.q_totals {
            writeln!(w, "{},{}", algorithm, fmt_g17(*total))
                .with_context(|| path_ctx(&qtotals_path))?;
        }
        w.flush().with_context(|| path_ctx(&qtotals_path))?;
    }
    written.push(qtotals_path);

    for p in &summary.pairs {
        let path = out_dir.join(format!("curve_mean_{}_{}.csv", p.algorithm, p.problem));
        let group: Vec<&TrialRecord> = records
            .iter()
            .filter(|r| r.algorithm == p.algorithm && r.problem == p.problem)
            .collect();
        let budget = group.first().map(|r| r.curve.len()).unwrap_or(0);
        let mut w = writer(&path)?;
        writeln!(w, "{MEAN_CURVE_HEADER}").with_context(|| path_ctx(&path))?;
        for i in 0..budget {
            let vals: Vec<f64> = group.iter().map(|r| r.curve[i]).collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let std = if vals.len() < 2 {
                0.0
            } else {
                (vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                    / (vals.len() - 1) as f64)
                    .sqrt()
            };
            writeln!(w, "{},{},{}", i + 1, fmt_g17(mean), fmt_g17(std))
                .with_context(|| path_ctx(&path))?;
        }
        w.flush().with_context(|| path_ctx(&path))?;
        written.push(path);
    }

    Ok(written)
}

fn writer(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| path_ctx(path))?,
    ))
}

fn path_ctx(path: &Path) -> String {
    format!("writing {}", path.display())
}

/// Parses `curves.csv` back into rows; used by round-trip checks.
pub fn parse_curves(path: &Path) -> Result<Vec<CurveRow>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CURVES_HEADER => {}
        other => bail!("{}: unexpected header {:?}", path.display(), other),
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let mut parts = line.split(',');
        let mut field = || {
            parts
                .next()
                .with_context(|| format!("{}:{}: missing field", path.display(), lineno + 2))
        };
        rows.push(CurveRow {
            algorithm: field()?.to_string(),
            problem: field()?.to_string(),
            trial: field()?.parse()?,
            eval_index: field()?.parse()?,
            best_f: field()?.parse()?,
        });
    }
    Ok(rows)
}
