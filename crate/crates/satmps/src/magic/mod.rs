//! Stabilizer Rényi entropies.
//!
//! For a normalized real state the Pauli weights `Π(P) = ⟨P⟩² / 2^n` form a
//! probability distribution over the `4^n` strings. `M₂ = -ln Σ_P Π(P) ⟨P⟩²`
//! and `M₁` is the Shannon entropy of `Π` minus `n ln 2`. Both vanish on
//! stabilizer states and stay below `n ln 2`.

mod exact;
mod pauli;
mod sample;

pub use exact::{
    exact_stabilizer_entropies, exact_stabilizer_entropy, pauli_distribution, pauli_from_masks,
    EXACT_MAGIC_LIMIT,
};
pub use pauli::{Pauli, PauliString};
pub use sample::{markov_m2, mps_pauli_expectation, sample_m1, sample_pauli_strings, MarkovConfig};

use thiserror::Error;

use crate::dense::DenseError;
use crate::mps::MpsError;

/// Rényi index of a stabilizer entropy.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum RenyiOrder {
    One,
    Two,
}

impl RenyiOrder {
    pub fn from_u8(alpha: u8) -> MagicResult<Self> {
        match alpha {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            other => Err(MagicError::BadOrder(other)),
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MagicError {
    #[error("exact enumeration over {n} sites exceeds the limit {limit}")]
    TooManySites { n: usize, limit: usize },

    #[error("Rényi order must be 1 or 2, got {0}")]
    BadOrder(u8),

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error(transparent)]
    Dense(#[from] DenseError),

    #[error(transparent)]
    Mps(#[from] MpsError),
}

pub type MagicResult<T> = Result<T, MagicError>;

/// A sampled stabilizer entropy with its standard error.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MagicEstimate {
    pub order: RenyiOrder,
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl MagicEstimate {
    /// Whether `exact` lies within `k` standard errors, with a small absolute
    /// floor for zero-variance estimates.
    pub fn agrees_with(&self, exact: f64, k: f64) -> bool {
        (self.value - exact).abs() <= k * self.std_error + 1e-9
    }
}

/// Inverse-variance weighted combination of independent estimates of the same
/// quantity. Estimates with zero error dominate; `None` for an empty slice or
/// mixed orders.
pub fn merge_estimates(parts: &[MagicEstimate]) -> Option<MagicEstimate> {
    let first = parts.first()?;
    if parts.iter().any(|p| p.order != first.order) {
        return None;
    }
    let samples = parts.iter().map(|p| p.samples).sum();
    let exact: Vec<_> = parts.iter().filter(|p| p.std_error == 0.0).collect();
    if !exact.is_empty() {
        let value = exact.iter().map(|p| p.value).sum::<f64>() / exact.len() as f64;
        return Some(MagicEstimate { order: first.order, value, std_error: 0.0, samples });
    }
    let (mut wsum, mut vsum) = (0.0, 0.0);
    for p in parts {
        let w = 1.0 / (p.std_error * p.std_error);
        wsum += w;
        vsum += w * p.value;
    }
    Some(MagicEstimate { order: first.order, value: vsum / wsum, std_error: wsum.sqrt().recip(), samples })
}
