//! Problem abstraction: box-constrained objectives and the unit-cube
//! normalization every other stage works in.
//!
//! All optimizer-internal arithmetic happens in `[0,1]^d`; only
//! [`Objective::evaluate_raw`] sees original coordinates. That keeps step
//! sizes and sigma ladders dimensionless across problems.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::Cell;

use crate::error::{Error, Result};

/// Compact box domain `[lower, upper] ⊂ R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypercube {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Hypercube {
    /// Validates `d >= 1`, finite bounds and `lower[i] < upper[i]`.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidConfig(String::from(
                "hypercube bounds must be non-empty and equal length",
            )));
        }
        for (i, (&a, &b)) in lower.iter().zip(&upper).enumerate() {
            if !a.is_finite() || !b.is_finite() || a >= b {
                return Err(Error::DomainViolation {
                    index: i,
                    value: b,
                    lower: a,
                    upper: b,
                });
            }
        }
        Ok(Hypercube { lower, upper })
    }

    /// Cube `[lo, hi]^d` with identical bounds in every coordinate.
    pub fn uniform(d: usize, lo: f64, hi: f64) -> Result<Self> {
        Hypercube::new(alloc::vec![lo; d], alloc::vec![hi; d])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Maps a raw point into `[0,1]^d`; errors if any coordinate is
    /// outside the box.
    pub fn normalize(&self, x_raw: &[f64]) -> Result<Vec<f64>> {
        if x_raw.len() != self.dim() {
            return Err(Error::InvalidConfig(String::from(
                "point dimension does not match domain",
            )));
        }
        let mut out = Vec::with_capacity(self.dim());
        for (i, &v) in x_raw.iter().enumerate() {
            let (a, b) = (self.lower[i], self.upper[i]);
            if !(a..=b).contains(&v) {
                return Err(Error::DomainViolation {
                    index: i,
                    value: v,
                    lower: a,
                    upper: b,
                });
            }
            out.push((v - a) / (b - a));
        }
        Ok(out)
    }

    /// Inverse of [`Hypercube::normalize`] for points in `[0,1]^d`.
    pub fn denormalize(&self, x_unit: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x_unit.len(), self.dim());
        x_unit
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&u, (&a, &b))| a + u * (b - a))
            .collect()
    }
}

/// One evaluated sample: unit-cube coordinates plus the objective value at
/// the corresponding raw point.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluatedPoint {
    pub x: Vec<f64>,
    pub f: f64,
}

type EvalFn = Box<dyn Fn(&[f64]) -> f64 + Send>;

/// A deterministic objective over a hypercube, with an evaluation counter
/// so budgets are enforced exactly.
///
/// A single instance is not synchronized; concurrent trials must each own
/// their own `Objective`.
pub struct Objective {
    name: String,
    domain: Hypercube,
    known_minimum: Option<f64>,
    eval_fn: EvalFn,
    calls: Cell<u64>,
}

impl Objective {
    pub fn new(
        name: impl Into<String>,
        domain: Hypercube,
        known_minimum: Option<f64>,
        eval_fn: impl Fn(&[f64]) -> f64 + Send + 'static,
    ) -> Self {
        Objective {
            name: name.into(),
            domain,
            known_minimum,
            eval_fn: Box::new(eval_fn),
            calls: Cell::new(0),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &Hypercube {
        &self.domain
    }

    /// Exact global minimum when one is configured; `None` for test
    /// functions whose minimum is only bounded.
    pub fn known_minimum(&self) -> Option<f64> {
        self.known_minimum
    }

    /// Number of objective evaluations performed so far.
    pub fn eval_count(&self) -> u64 {
        self.calls.get()
    }

    /// Evaluates at a raw-domain point, counting the call.
    pub fn evaluate_raw(&self, x_raw: &[f64]) -> Result<f64> {
        for (i, &v) in x_raw.iter().enumerate() {
            let (a, b) = (self.domain.lower[i], self.domain.upper[i]);
            if !(a..=b).contains(&v) {
                return Err(Error::DomainViolation {
                    index: i,
                    value: v,
                    lower: a,
                    upper: b,
                });
            }
        }
        self.calls.set(self.calls.get() + 1);
        Ok((self.eval_fn)(x_raw))
    }

    /// Evaluates at a unit-cube point, denormalizing first.
    pub fn evaluate_unit(&self, x_unit: &[f64]) -> Result<f64> {
        for (i, &v) in x_unit.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::DomainViolation {
                    index: i,
                    value: v,
                    lower: 0.0,
                    upper: 1.0,
                });
            }
        }
        let raw = self.domain.denormalize(x_unit);
        self.calls.set(self.calls.get() + 1);
        Ok((self.eval_fn)(&raw))
    }
}

impl core::fmt::Debug for Objective {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Objective")
            .field("name", &self.name)
            .field("dimension", &self.dimension())
            .field("known_minimum", &self.known_minimum)
            .field("calls", &self.calls.get())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn normalize_corners_and_midpoint() {
        let cube = Hypercube::uniform(3, -15.0, 20.0).unwrap();
        let zeros = cube.normalize(&[-15.0, -15.0, -15.0]).unwrap();
        assert_eq!(zeros, vec![0.0, 0.0, 0.0]);
        let ones = cube.normalize(&[20.0, 20.0, 20.0]).unwrap();
        assert_eq!(ones, vec![1.0, 1.0, 1.0]);
        let mid = cube.normalize(&[2.5, 2.5, 2.5]).unwrap();
        for &v in &mid {
            assert!((v - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn normalize_rejects_out_of_domain() {
        let cube = Hypercube::uniform(2, 0.0, 1.0).unwrap();
        let err = cube.normalize(&[0.5, 1.5]).unwrap_err();
        assert!(matches!(err, Error::DomainViolation { index: 1, .. }));
    }

    #[test]
    fn hypercube_rejects_inverted_bounds() {
        assert!(Hypercube::new(vec![1.0], vec![0.0]).is_err());
        assert!(Hypercube::new(vec![], vec![]).is_err());
    }

    #[test]
    fn objective_counts_calls_and_is_deterministic() {
        let cube = Hypercube::uniform(2, -1.0, 1.0).unwrap();
        let obj = Objective::new("sq", cube, Some(0.0), |x| {
            x.iter().map(|v| v * v).sum()
        });
        let a = obj.evaluate_raw(&[0.3, -0.4]).unwrap();
        let b = obj.evaluate_raw(&[0.3, -0.4]).unwrap();
        assert_eq!(a, b);
        assert_eq!(obj.eval_count(), 2);
        // unit-cube evaluation hits the same function after denormalizing
        let c = obj.evaluate_unit(&[0.65, 0.3]).unwrap();
        assert!((c - a).abs() < 1e-15);
        assert_eq!(obj.eval_count(), 3);
    }

    #[test]
    fn evaluate_unit_rejects_outside_cube() {
        let cube = Hypercube::uniform(1, 0.0, 1.0).unwrap();
        let obj = Objective::new("id", cube, None, |x| x[0]);
        assert!(obj.evaluate_unit(&[1.0000001]).is_err());
    }
}
