//! Problem registry: maps names like `ackley30` to configured objectives.
//!
//! A problem name is a test-function name with the dimension appended.
//! The Schoen instance is seeded per dimension so every algorithm and
//! trial of an experiment optimizes the same function.

use anyhow::{bail, Context, Result};
use sosa_core::{make_test_function, Objective};

/// The benchmark suite run by default.
pub const SUITE: [&str; 6] = [
    "ackley30",
    "rastrigin30",
    "levy30",
    "keane30",
    "michalewicz30",
    "schoen35",
];

/// Fixed offset for Schoen instance seeds; the instance depends only on
/// the dimension, never on the trial seed.
const SCHOEN_SEED_BASE: u64 = 9000;

/// Splits `ackley30` into `("ackley", 30)`.
fn split_name(name: &str) -> Result<(&str, usize)> {
    let Some(last_non_digit) = name.rfind(|c: char| !c.is_ascii_digit()) else {
        bail!("problem '{name}' has no function name");
    };
    let (base, dim_str) = name.split_at(last_non_digit + 1);
    if dim_str.is_empty() {
        bail!("problem '{name}' must be a function name followed by its dimension, e.g. ackley30");
    }
    let d: usize = dim_str
        .parse()
        .with_context(|| format!("problem '{name}': bad dimension '{dim_str}'"))?;
    Ok((base, d))
}

/// Builds a fresh objective instance for a registered problem name.
pub fn build(name: &str) -> Result<Objective> {
    let (base, d) = split_name(name)?;
    let obj = make_test_function(base, d, SCHOEN_SEED_BASE + d as u64)
        .with_context(|| format!("problem '{name}'"))?;
    Ok(Objective::new(
        name.to_string(),
        obj.domain().clone(),
        obj.known_minimum(),
        move |x: &[f64]| obj.evaluate_raw(x).expect("registry objective evaluated out of domain"),
    ))
}

/// Validates a problem name without keeping the objective.
pub fn validate(name: &str) -> Result<usize> {
    build(name).map(|obj| obj.dimension())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_resolve() {
        for name in SUITE {
            let obj = build(name).unwrap();
            assert_eq!(obj.name(), name);
            let expect_d = if name == "schoen35" { 35 } else { 30 };
            assert_eq!(obj.dimension(), expect_d);
        }
    }

    #[test]
    fn arbitrary_dimensions_resolve() {
        assert_eq!(build("ackley4").unwrap().dimension(), 4);
        assert_eq!(build("levy12").unwrap().dimension(), 12);
    }

    #[test]
    fn bad_names_are_rejected() {
        assert!(build("ackley").is_err());
        assert!(build("30").is_err());
        assert!(build("rosenbrock30").is_err());
        assert!(build("ackley1").is_err());
    }

    #[test]
    fn schoen_instance_is_dimension_stable() {
        let a = build("schoen35").unwrap();
        let b = build("schoen35").unwrap();
        let x = vec![0.25; 35];
        assert_eq!(a.evaluate_raw(&x).unwrap(), b.evaluate_raw(&x).unwrap());
    }
}
