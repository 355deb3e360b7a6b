use super::{Mps, MpsError, MpsResult};
use crate::sat::CnfInstance;

/// Outcome of checking an MPS against an instance.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Certificate {
    /// Every projector leaves the state unchanged to within the tolerance.
    pub invariant: bool,
    /// `2^n ⟨ψ|ψ⟩`, the model count if the invariant holds.
    pub count: f64,
    /// Smallest `⟨ψ|P_j|ψ⟩ / ⟨ψ|ψ⟩` over the clauses (1 for no clauses).
    pub min_fidelity: f64,
    /// 0-based clause attaining `min_fidelity`.
    pub worst_clause: Option<usize>,
}

/// Check that every clause projector fixes the state and read the count off
/// the norm.
///
/// All contractions run over the full chain without assuming canonical form,
/// so a corrupted snapshot cannot pass by breaking an isometry.
pub fn verify_certificate(mps: &Mps, instance: &CnfInstance, tolerance: f64) -> MpsResult<Certificate> {
    if mps.n() != instance.n() {
        return Err(MpsError::SizeMismatch { mps: mps.n(), instance: instance.n() });
    }
    let tensor_norm = mps.tensor_norm_sq();
    let count = (1u64 << mps.n()) as f64 * mps.norm_sq() * tensor_norm;
    if !(tensor_norm > 0.0) || !count.is_finite() {
        return Ok(Certificate { invariant: false, count: 0.0, min_fidelity: 0.0, worst_clause: None });
    }
    let mut min_fidelity = 1.0;
    let mut worst_clause = None;
    for (j, c) in instance.clauses().iter().enumerate() {
        let ops: Vec<(usize, [f64; 2])> = c
            .violating_sites()
            .iter()
            .map(|&(site, v)| (site, if v { [0.0, 1.0] } else { [1.0, 0.0] }))
            .collect();
        let fidelity = 1.0 - mps.diagonal_expectation(&ops) / tensor_norm;
        if fidelity < min_fidelity {
            min_fidelity = fidelity;
            worst_clause = Some(j);
        }
    }
    Ok(Certificate { invariant: min_fidelity >= 1.0 - tolerance, count, min_fidelity, worst_clause })
}
