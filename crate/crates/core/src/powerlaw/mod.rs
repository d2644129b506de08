//! Discrete power-law fitting of degree sequences.
//!
//! Maximum-likelihood exponent with zeta normalisation, cutoff selection by
//! Kolmogorov–Smirnov distance, and a bootstrap goodness-of-fit test.

mod fit;
mod gof;
mod zeta;

use thiserror::Error;

pub use fit::{fit_power_law, ks_distance, FitResult, ALPHA_LOWER, ALPHA_TOL, ALPHA_UPPER, MIN_OBSERVATIONS};
pub use gof::{
    ccdf_table, goodness_of_fit, CcdfPoint, DiscretePowerLaw, GofResult, DEFAULT_SYNTHETIC_RUNS, MIN_ADVISED_RUNS,
    REJECT_AT_OR_BELOW,
};
pub use zeta::hurwitz_zeta;

#[derive(Debug, Error, PartialEq)]
pub enum PowerLawError {
    #[error("need at least {required} observations, got {observations}")]
    InsufficientData { observations: usize, required: usize },
    #[error("observations must be >= 1")]
    NonPositive,
    #[error("no cutoff leaves a tail with variation; cannot fit")]
    NoValidCutoff,
    #[error("fit does not match the data (tail count differs)")]
    FitMismatch,
    #[error("at least one synthetic run is required")]
    NoSyntheticRuns,
}
