//! Experiment configuration: a TOML file with flat `experiment`,
//! `algorithms` and `problems` sections, overridable field by field from
//! the command line.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use sosa_core::Algorithm;

use crate::registry;

/// Environment variable supplying the default output directory.
pub const OUT_DIR_ENV: &str = "SOSA_OUT_DIR";

/// Fully resolved experiment: what to run and where results go.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub algorithms: Vec<Algorithm>,
    pub problems: Vec<String>,
    pub trials: u32,
    pub budget: usize,
    pub base_seed: u64,
    pub out_dir: PathBuf,
    pub jobs: usize,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            algorithms: Algorithm::ALL.to_vec(),
            problems: registry::SUITE.iter().map(|s| s.to_string()).collect(),
            trials: 30,
            budget: 500,
            base_seed: 1,
            out_dir: default_out_dir(),
            jobs: 1,
        }
    }
}

fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("results"))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    experiment: ExperimentSection,
    #[serde(default)]
    algorithms: ListSection,
    #[serde(default)]
    problems: ListSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentSection {
    trials: Option<u32>,
    budget: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    jobs: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ListSection {
    names: Option<Vec<String>>,
}

/// Command-line overrides, all optional; a `None` falls through to the
/// config file and then to the defaults.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub algorithms: Option<Vec<String>>,
    pub problems: Option<Vec<String>>,
    pub trials: Option<u32>,
    pub budget: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

/// Loads the optional config file, applies overrides and validates the
/// result. All name errors surface here, before any run starts.
pub fn resolve(config_path: Option<&Path>, overrides: &Overrides) -> Result<ExperimentSpec> {
    let file: ConfigFile = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config file {}", path.display()))?;
            toml::from_str(&text)
                .with_context(|| format!("parsing config file {}", path.display()))?
        }
        None => ConfigFile::default(),
    };

    let defaults = ExperimentSpec::default();
    let algorithm_names = overrides
        .algorithms
        .clone()
        .or(file.algorithms.names)
        .unwrap_or_else(|| Algorithm::ALL.iter().map(|a| a.name().to_string()).collect());
    let problems = overrides
        .problems
        .clone()
        .or(file.problems.names)
        .unwrap_or(defaults.problems);

    let spec = ExperimentSpec {
        algorithms: algorithm_names
            .iter()
            .map(|s| Algorithm::parse(s).map_err(anyhow::Error::from))
            .collect::<Result<_>>()?,
        problems,
        trials: overrides.trials.or(file.experiment.trials).unwrap_or(defaults.trials),
        budget: overrides.budget.or(file.experiment.budget).unwrap_or(defaults.budget),
        base_seed: overrides.seed.or(file.experiment.seed).unwrap_or(defaults.base_seed),
        out_dir: overrides
            .out
            .clone()
            .or(file.experiment.out)
            .unwrap_or(defaults.out_dir),
        jobs: overrides.jobs.or(file.experiment.jobs).unwrap_or(defaults.jobs),
    };
    validate(&spec)?;
    Ok(spec)
}

fn validate(spec: &ExperimentSpec) -> Result<()> {
    if spec.algorithms.is_empty() {
        bail!("no algorithms selected");
    }
    if spec.problems.is_empty() {
        bail!("no problems selected");
    }
    if spec.trials == 0 {
        bail!("trials must be at least 1");
    }
    if spec.jobs == 0 {
        bail!("jobs must be at least 1");
    }
    for name in &spec.problems {
        let d = registry::validate(name)?;
        let n0 = 2 * (d + 1);
        if spec.budget < n0 {
            bail!(
                "budget {} is below the initial design size {n0} for problem '{name}'",
                spec.budget
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_cover_the_suite() {
        let spec = resolve(None, &Overrides::default()).unwrap();
        assert_eq!(spec.algorithms.len(), 4);
        assert_eq!(spec.problems.len(), 6);
        assert_eq!(spec.trials, 30);
        assert_eq!(spec.budget, 500);
    }

    #[test]
    fn file_values_and_flag_overrides() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.toml");
        std::fs::write(
            &path,
            r#"
[experiment]
trials = 5
budget = 80
seed = 99
jobs = 2

[algorithms]
names = ["dds", "sosa"]

[problems]
names = ["ackley5"]
"#,
        )
        .unwrap();
        let spec = resolve(Some(&path), &Overrides::default()).unwrap();
        assert_eq!(spec.trials, 5);
        assert_eq!(spec.base_seed, 99);
        assert_eq!(spec.algorithms, vec![Algorithm::Dds, Algorithm::Sosa]);

        let over = Overrides {
            trials: Some(2),
            problems: Some(vec!["levy6".into()]),
            ..Overrides::default()
        };
        let spec = resolve(Some(&path), &over).unwrap();
        assert_eq!(spec.trials, 2);
        assert_eq!(spec.problems, vec!["levy6".to_string()]);
        assert_eq!(spec.budget, 80);
    }

    #[test]
    fn bad_names_fail_before_running() {
        let over = Overrides {
            algorithms: Some(vec!["annealing".into()]),
            ..Overrides::default()
        };
        assert!(resolve(None, &over).is_err());

        let over = Overrides {
            problems: Some(vec!["rosenbrock30".into()]),
            ..Overrides::default()
        };
        assert!(resolve(None, &over).is_err());
    }

    #[test]
    fn budget_below_design_size_is_rejected() {
        let over = Overrides {
            problems: Some(vec!["ackley30".into()]),
            budget: Some(30),
            ..Overrides::default()
        };
        let err = resolve(None, &over).unwrap_err().to_string();
        assert!(err.contains("design size"), "{err}");
    }
}
