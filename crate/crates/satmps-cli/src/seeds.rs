//! Counter-based seed derivation and the job grid.
//!
//! A derived seed is word `i` of the ChaCha stream selected by `(n, m)` under
//! the master key, so seeds for instance `i` never depend on how many
//! instances come after it.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use satmps::sat::{
    generate_satisfiable_with, random_instance, unique_solution_filter_with, CnfInstance, SatResult,
};

use crate::config::{Ensemble, ExperimentConfig};

/// Seed number `index` on stream `stream` under `master`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    let mut rng = ChaCha20Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng.set_word_pos(2 * index as u128);
    rng.next_u64()
}

/// Seed for sub-task `k` of a job.
pub fn child_seed(seed: u64, k: u64) -> u64 { derive_seed(seed, u64::MAX, k) }

/// One `(n, m, instance)` cell of a sweep.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Job {
    pub n: usize,
    pub m: usize,
    pub index: usize,
    pub seed: u64,
}

impl Job {
    /// Actual density `m / n`.
    pub fn alpha(&self) -> f64 { self.m as f64 / self.n as f64 }

    pub fn instance(&self, cfg: &ExperimentConfig) -> SatResult<CnfInstance> {
        match cfg.ensemble {
            Ensemble::Any => {
                Ok(random_instance(self.n, self.m, &mut rand_chacha::ChaCha8Rng::seed_from_u64(self.seed)))
            }
            Ensemble::Satisfiable => generate_satisfiable_with(self.n, self.m, self.seed, cfg.rejection_budget),
            Ensemble::Unique => unique_solution_filter_with(self.n, self.m, self.seed, cfg.rejection_budget),
        }
    }
}

/// All jobs in `(n, m, index)` order. Duplicate `(n, m)` cells produced by
/// rounding are merged.
pub fn jobs(cfg: &ExperimentConfig) -> Vec<Job> {
    let mut out = Vec::new();
    let mut cells: Vec<(usize, usize)> = cfg
        .n
        .iter()
        .flat_map(|&n| cfg.alpha.iter().map(move |&a| (n, (a * n as f64).round() as usize)))
        .collect();
    cells.sort_unstable();
    cells.dedup();
    for (n, m) in cells {
        for index in 0..cfg.instance_count() {
            let seed = match &cfg.seeds {
                Some(s) => s[index],
                None => derive_seed(cfg.seed, ((n as u64) << 32) | m as u64, index as u64),
            };
            out.push(Job { n, m, index, seed });
        }
    }
    out
}
