//! Closed-form and stochastic classical models of random 3-SAT states.

mod constants;
mod diagonal;
mod grouped;
mod reservoir;
mod rows;

pub use constants::{
    alpha_for_filling, alpha_sharp, critical_alpha_star, initial_schmidt_constants, initial_schmidt_slope,
    late_slope, reservoir_dimension, violation_counts_estimate, SchmidtConstants, ViolationCounts,
};
pub use diagonal::{
    diagonal_model_entropy, poisson_expected_log1p, random_combinatorial_entropy, DiagonalEntropy,
    DiagonalModelParams,
};
pub use grouped::{find_tau_hat, grouped_violation_entropy};
pub use reservoir::{
    markov_degree_step, model_entropy_curve, triangle_correction, DegreeDistribution, ReservoirCurve,
    ReservoirState,
};
pub use rows::{
    closed_form_mean_ln_omega, empirical_row_statistics, row_model_simulate, RowModelConfig, RowStats,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("filling fraction {0} outside [0, 1]")]
    Filling(f64),

    #[error("{0} sites: the model needs an even number")]
    OddSites(usize),

    #[error("{n} sites is too few (need at least {min})")]
    TooFewSites { n: usize, min: usize },

    #[error("{n} sites exceeds the limit {limit}")]
    TooManySites { n: usize, limit: usize },

    #[error("{triangles} triangles exceed the {max} available")]
    TooManyTriangles { triangles: f64, max: f64 },

    #[error("cut {cut} outside 1..{n}")]
    BadCut { cut: usize, n: usize },

    #[error("{name} = {value} is outside its domain")]
    Domain { name: &'static str, value: f64 },

    #[error("instances disagree on n: {0} vs {1}")]
    MixedSizes(usize, usize),
}

pub type ModelResult<T> = Result<T, ModelError>;

/// Mean and sample standard deviation; `(NaN, NaN)` when empty, SD zero for
/// a single value.
pub(crate) fn mean_sd(values: impl IntoIterator<Item = f64>) -> (f64, f64, usize) {
    let (mut n, mut mean, mut m2) = (0usize, 0.0, 0.0);
    for x in values {
        n += 1;
        let d = x - mean;
        mean += d / n as f64;
        m2 += d * (x - mean);
    }
    match n {
        0 => (f64::NAN, f64::NAN, 0),
        1 => (mean, 0.0, 1),
        _ => (mean, (m2 / (n - 1) as f64).sqrt(), n),
    }
}
