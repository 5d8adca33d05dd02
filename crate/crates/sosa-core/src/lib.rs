//! Derivative-free global optimization of expensive black-box functions
//! over box domains, built on a cubic RBF response surface and stochastic
//! candidate search.
//!
//! Each iteration fits an interpolant to every evaluated point, generates
//! a cloud of random candidates around the incumbent, scores them by a
//! weighted blend of predicted value and distance to the evaluated set,
//! and spends the next expensive evaluation on the winner. Four variants
//! share the engine and differ only in how candidate coordinates are
//! chosen to be perturbed:
//!
//! * [`Algorithm::Sosa`] — per-coordinate probabilities from a local
//!   sensitivity analysis of the surrogate at the incumbent;
//! * [`Algorithm::Lmsrbf`] — every coordinate, always;
//! * [`Algorithm::Dycors`] — a shared probability that decays with the
//!   evaluation count;
//! * [`Algorithm::Dds`] — the surrogate-free greedy baseline.
//!
//! The crate is `no_std` (with `alloc`); anything involving clocks, files
//! or threads lives in the companion CLI crate.
//!
//! ```
//! use sosa_core::{run, Algorithm, Hypercube, Objective, OptimizerConfig};
//!
//! let cube = Hypercube::uniform(2, -1.0, 1.0).unwrap();
//! let objective = Objective::new("bowl", cube, Some(0.0), |x| {
//!     x[0] * x[0] + x[1] * x[1]
//! });
//! let config = OptimizerConfig::for_dimension(Algorithm::Sosa, 2, 40, 7);
//! let record = run(&objective, &config).unwrap();
//! assert!(record.final_best_f < 0.05);
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod candidates;
pub mod doe;
pub mod domain;
pub mod error;
pub mod linalg;
pub mod optimizer;
pub mod sensitivity;
pub mod surrogate;
pub mod testfns;
pub mod trial;

pub use candidates::{
    default_candidate_count, default_delta_min, CandidateSet, PerturbationPolicy, PolicyKind,
    DEFAULT_SIGMA_LADDER,
};
pub use doe::{latin_hypercube, Design};
pub use domain::{EvaluatedPoint, Hypercube, Objective};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use optimizer::{
    run, run_dds, Algorithm, MeritWeights, OptimizerConfig, OptimizerState,
};
pub use sensitivity::{PerturbationMatrix, SensitivityProfile, SENSITIVITY_DELTA};
pub use surrogate::{fit, SurrogateModel};
pub use testfns::make_test_function;
pub use trial::{RunDiagnostics, TrialRecord};
