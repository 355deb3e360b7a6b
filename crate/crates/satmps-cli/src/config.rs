//! Experiment configuration, read from TOML or JSON.
//!
//! Every key is optional. A minimal TOML file:
//!
//! ```toml
//! n = [10, 12]
//! alpha = [4.27]
//! instances = 5
//! seed = 0
//! ```
//!
//! Subcommand-specific keys live in the `[magic]`, `[models]` and `[verify]`
//! tables. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use satmps::mps::{GateKind, Schedule, TruncationPolicy};
use serde::{Deserialize, Serialize};

use crate::UsageError;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Dense,
    #[default]
    Mps,
    /// MPS, cross-checked against the dense oracle where it fits.
    Both,
}

/// Which random instances a sweep draws.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    /// Unconditioned uniform 3-SAT.
    Any,
    #[default]
    Satisfiable,
    /// Exactly one solution.
    Unique,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: Vec<usize>,
    /// Requested densities; the clause count is `round(α n)`.
    pub alpha: Vec<f64>,
    pub instances: usize,
    /// Master seed.
    pub seed: u64,
    /// Explicit per-instance seeds, reused for every `(n, α)` cell.
    pub seeds: Option<Vec<u64>>,
    pub ensemble: Ensemble,
    pub rejection_budget: usize,
    /// Largest `n` for which solutions are counted exactly.
    pub count_limit: usize,
    pub backend: Backend,
    pub dtau: f64,
    pub tau_max: f64,
    pub record_every: usize,
    pub linearized: bool,
    /// Bond cap; 0 means unbounded.
    pub chi: usize,
    pub cutoff: f64,
    /// Trace cut, `⌊n/2⌋` when absent.
    pub cut: Option<usize>,
    /// Largest tolerated `|ΔS|` between backends.
    pub tolerance: f64,
    /// Write `.mps` and `.cnf` files beside the flat-protocol output.
    pub snapshots: bool,
    pub out: Option<PathBuf>,
    pub workers: usize,
    pub magic: MagicConfig,
    pub models: ModelsConfig,
    pub verify: VerifyConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: vec![10],
            alpha: vec![4.27],
            instances: 1,
            seed: 0,
            seeds: None,
            ensemble: Ensemble::default(),
            rejection_budget: satmps::sat::DEFAULT_REJECTION_BUDGET,
            count_limit: 40,
            backend: Backend::default(),
            dtau: 0.05,
            tau_max: 12.0,
            record_every: 1,
            linearized: false,
            chi: 256,
            cutoff: 1e-10,
            cut: None,
            tolerance: 1e-3,
            snapshots: false,
            out: None,
            workers: 0,
            magic: MagicConfig::default(),
            models: ModelsConfig::default(),
            verify: VerifyConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MagicConfig {
    pub taus: Vec<f64>,
    /// Perfect Pauli samples for M₁.
    pub samples: usize,
    /// Metropolis steps for M₂; 0 skips the chain.
    pub markov_steps: usize,
    pub batches: usize,
    /// Sampled and exact values further apart than this many standard errors
    /// count as a failed cross-check.
    pub sigma: f64,
}

impl Default for MagicConfig {
    fn default() -> Self {
        Self { taus: vec![0.0, 0.5, 1.0, 2.0, 4.0], samples: 1000, markov_steps: 20_000, batches: 20, sigma: 4.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelsConfig {
    pub diagonal_n: Vec<usize>,
    pub fillings: Vec<f64>,
    pub diagonal_samples: usize,
    pub reservoir_n: Vec<usize>,
    /// Curves run to `m = density_max · n`.
    pub density_max: f64,
    pub row_n: Vec<usize>,
    pub row_samples: usize,
    /// `n` of the model-versus-empirical overlay; 0 skips it.
    pub overlay_n: usize,
    pub overlay_instances: usize,
}

impl Default for ModelsConfig {
    fn default() -> Self {
        Self {
            diagonal_n: vec![10, 14],
            fillings: vec![0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
            diagonal_samples: 20,
            reservoir_n: vec![10, 14, 20, 30, 40],
            density_max: 6.0,
            row_n: vec![20, 40],
            row_samples: 2000,
            overlay_n: 14,
            overlay_instances: 20,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub mps: Option<PathBuf>,
    pub cnf: Option<PathBuf>,
    /// Largest tolerated `1 - ⟨P_j⟩`; 1e-9 when absent.
    pub tolerance: Option<f64>,
}

impl ExperimentConfig {
    /// Parse by extension: `.json` is JSON, anything else TOML.
    pub fn from_path(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: Self = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        let bad = |msg: String| Err(UsageError(msg));
        if let Some(&n) = self.n.iter().find(|&&n| n < 3 || n > 63) {
            return bad(format!("n = {n} outside 3..=63"));
        }
        if let Some(a) = self.alpha.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
            return bad(format!("alpha = {a} must be finite and non-negative"));
        }
        if !(self.dtau > 0.0 && self.dtau.is_finite()) || !(self.tau_max >= 0.0) {
            return bad(format!("need dtau > 0 and tau_max >= 0, got {} and {}", self.dtau, self.tau_max));
        }
        if let Some(c) = self.cut {
            if let Some(&n) = self.n.iter().find(|&&n| c == 0 || c >= n) {
                return bad(format!("cut {c} outside 1..{n}"));
            }
        }
        if self.magic.taus.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return bad("magic.taus must be finite and non-negative".into());
        }
        Ok(())
    }

    pub fn instance_count(&self) -> usize {
        self.seeds.as_ref().map_or(self.instances, Vec::len)
    }

    pub fn policy(&self) -> TruncationPolicy {
        let p = TruncationPolicy::exact().with_cutoff(self.cutoff);
        if self.chi == 0 { p } else { p.with_max_bond(self.chi) }
    }

    pub fn schedule(&self) -> Schedule {
        Schedule {
            dtau: self.dtau,
            tau_max: self.tau_max,
            record_every: self.record_every.max(1),
            gate: if self.linearized { GateKind::Linearized } else { GateKind::Exact },
            ..Schedule::default()
        }
    }

    pub fn cut_for(&self, n: usize) -> usize { self.cut.unwrap_or(n / 2) }
}
