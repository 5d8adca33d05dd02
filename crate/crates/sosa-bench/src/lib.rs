//! Benchmark driver for the surrogate-optimizer family: resolves an
//! experiment spec (config file + flag overrides), runs the trial grid on
//! a worker pool, and emits deterministic CSV outputs with per-problem Q
//! summaries.

pub mod config;
pub mod driver;
pub mod emit;
pub mod registry;
pub mod summary;

pub use config::{ExperimentSpec, Overrides, OUT_DIR_ENV};
pub use driver::run_experiment;
pub use emit::{emit_outputs, parse_curves};
pub use summary::{q_metric, summarize, PairSummary, Summary};
