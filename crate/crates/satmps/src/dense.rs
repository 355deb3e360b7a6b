//! Exact statevector oracle.
//!
//! Amplitudes are real and indexed by big-endian bitstrings (site 1 is the
//! most significant bit). Both protocols keep them non-negative, so nothing
//! here needs complex arithmetic; Pauli strings with Y are handled by a parity
//! argument in [`pauli_expectation`].

use ndarray::ArrayView2;
use thiserror::Error;

use crate::linalg;
use crate::magic::PauliString;
use crate::sat::CnfInstance;

/// Largest `n` for which energy diagonals and flat traces are built by default.
pub const DEFAULT_DENSE_LIMIT: usize = 14;

/// Schmidt values below this are treated as numerical zeros.
pub const SCHMIDT_FLOOR: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DenseError {
    #[error("n = {n} exceeds the dense limit {limit}")]
    TooManySites { n: usize, limit: usize },

    #[error("amplitude vector of length {len} is not 2^{n}")]
    BadLength { n: usize, len: usize },

    #[error("amplitude {index} is not finite")]
    NonFinite { index: usize },

    #[error("cut {cut} is outside 1..={max}")]
    BadCut { cut: usize, max: usize },

    #[error("Pauli string has length {found}, state has {expected} sites")]
    PauliLength { expected: usize, found: usize },

    #[error("state has {state} sites, instance has {instance}")]
    SizeMismatch { state: usize, instance: usize },

    #[error("projection onto the solution space of an unsatisfiable instance")]
    Unsatisfiable,

    #[error("SVD failed: {0}")]
    Linalg(String),
}

pub type DenseResult<T> = Result<T, DenseError>;

/// Real amplitude vector over `2^n` basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amplitudes: Vec<f64>,
}

impl DenseState {
    pub fn new(n: usize, amplitudes: Vec<f64>) -> DenseResult<Self> {
        if n >= usize::BITS as usize || amplitudes.len() != 1usize << n {
            return Err(DenseError::BadLength { n, len: amplitudes.len() });
        }
        if let Some(index) = amplitudes.iter().position(|a| !a.is_finite()) {
            return Err(DenseError::NonFinite { index });
        }
        Ok(Self { n, amplitudes })
    }

    /// `|+⟩^{⊗n}`.
    pub fn uniform(n: usize) -> Self {
        let dim = 1usize << n;
        Self { n, amplitudes: vec![(dim as f64).sqrt().recip(); dim] }
    }

    /// Computational basis state `|x⟩`.
    pub fn basis(n: usize, x: usize) -> Self {
        let mut amplitudes = vec![0.0; 1 << n];
        amplitudes[x] = 1.0;
        Self { n, amplitudes }
    }

    pub fn n(&self) -> usize { self.n }

    pub fn amplitudes(&self) -> &[f64] { &self.amplitudes }

    pub fn into_amplitudes(self) -> Vec<f64> { self.amplitudes }

    pub fn norm_sq(&self) -> f64 { self.amplitudes.iter().map(|a| a * a).sum() }

    /// Unit-norm copy; the zero vector is returned unchanged.
    pub fn normalized(&self) -> Self {
        let norm = self.norm_sq().sqrt();
        let mut out = self.clone();
        if norm > 0.0 {
            out.amplitudes.iter_mut().for_each(|a| *a /= norm);
        }
        out
    }

    /// Largest elementwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Singular values of the `2^cut × 2^{n-cut}` reshaped amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum {
    pub cut: usize,
    pub values: Vec<f64>,
}

impl SchmidtSpectrum {
    pub fn norm_sq(&self) -> f64 { self.values.iter().map(|v| v * v).sum() }

    pub fn entropy(&self) -> f64 { entanglement_entropy(self) }

    pub fn rank(&self) -> usize { self.values.len() }
}

/// Violated-clause count `E(x)` for every basis state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergyDiagonal {
    n: usize,
    m: usize,
    energies: Vec<u32>,
}

impl EnergyDiagonal {
    pub fn n(&self) -> usize { self.n }

    pub fn m(&self) -> usize { self.m }

    pub fn energies(&self) -> &[u32] { &self.energies }

    pub fn min_energy(&self) -> u32 { self.energies.iter().copied().min().unwrap_or(0) }

    pub fn solution_count(&self) -> usize { self.energies.iter().filter(|&&e| e == 0).count() }

    /// `Σ_{E(x)=0} ψ_x²`.
    pub fn solution_weight(&self, state: &DenseState) -> f64 {
        self.energies
            .iter()
            .zip(state.amplitudes())
            .filter(|(&e, _)| e == 0)
            .map(|(_, a)| a * a)
            .sum()
    }
}

pub fn build_energy_diagonal(instance: &CnfInstance) -> DenseResult<EnergyDiagonal> {
    build_energy_diagonal_with_limit(instance, DEFAULT_DENSE_LIMIT)
}

pub fn build_energy_diagonal_with_limit(
    instance: &CnfInstance,
    limit: usize,
) -> DenseResult<EnergyDiagonal> {
    let n = instance.n();
    if n > limit {
        return Err(DenseError::TooManySites { n, limit });
    }
    let mut energies = vec![0u32; 1 << n];
    for (mask, pattern) in instance.index_masks() {
        for (x, e) in energies.iter_mut().enumerate() {
            if x as u64 & mask == pattern {
                *e += 1;
            }
        }
    }
    Ok(EnergyDiagonal { n, m: instance.m(), energies })
}

/// Normalized `e^{-τH}|+…+⟩`, evaluated in closed form.
///
/// `τ = ∞` gives the normalized projection onto the `E = 0` subspace.
pub fn ite_evolve(diag: &EnergyDiagonal, tau: f64) -> DenseResult<DenseState> {
    assert!(tau >= 0.0, "imaginary time must be non-negative");
    let e0 = diag.min_energy();
    let amplitudes: Vec<f64> = if tau.is_infinite() {
        if e0 > 0 {
            return Err(DenseError::Unsatisfiable);
        }
        diag.energies.iter().map(|&e| if e == 0 { 1.0 } else { 0.0 }).collect()
    } else {
        // Shifting by the minimum keeps the largest amplitude at 1.
        diag.energies.iter().map(|&e| (-tau * (e - e0) as f64).exp()).collect()
    };
    Ok(DenseState { n: diag.n, amplitudes }.normalized())
}

/// `Σ ψ_x²` over satisfying `x`.
pub fn solution_weight(state: &DenseState, instance: &CnfInstance) -> f64 {
    let masks = instance.index_masks();
    state
        .amplitudes
        .iter()
        .enumerate()
        .filter(|(x, _)| masks.iter().all(|&(mask, pat)| *x as u64 & mask != pat))
        .map(|(_, a)| a * a)
        .sum()
}

/// Schmidt values across the bond after site `cut`.
pub fn schmidt(state: &DenseState, cut: usize) -> DenseResult<SchmidtSpectrum> {
    if cut == 0 || cut >= state.n {
        return Err(DenseError::BadCut { cut, max: state.n.saturating_sub(1) });
    }
    let rows = 1usize << cut;
    let cols = 1usize << (state.n - cut);
    let values = schmidt_values(ArrayView2::from_shape((rows, cols), &state.amplitudes).unwrap())?;
    Ok(SchmidtSpectrum { cut, values })
}

/// Singular values of an arbitrary real matrix with the numerical floor
/// applied.
pub fn schmidt_values(matrix: ArrayView2<f64>) -> DenseResult<Vec<f64>> {
    let mut values = linalg::singular_values(matrix).map_err(DenseError::Linalg)?;
    values.retain(|&v| v >= SCHMIDT_FLOOR);
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// `S = -Σ λ² ln λ²`, with the spectrum renormalized so that `Σ λ² = 1`.
pub fn entanglement_entropy(spectrum: &SchmidtSpectrum) -> f64 {
    linalg::schmidt_entropy(&spectrum.values)
}

/// One clause application in the flat protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatStep {
    pub clauses_applied: usize,
    /// Spectrum of the normalized state; empty once the state vanished.
    pub spectrum: SchmidtSpectrum,
    /// Raw squared norm of the unnormalized state.
    pub norm_sq: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseFlatTrace {
    pub steps: Vec<FlatStep>,
    /// Final unnormalized state.
    pub state: DenseState,
}

impl DenseFlatTrace {
    pub fn final_norm_sq(&self) -> f64 { self.state.norm_sq() }

    /// `2^n · |ψ|²`, the model count.
    pub fn count_estimate(&self) -> f64 {
        self.final_norm_sq() * (1u64 << self.state.n) as f64
    }
}

/// Apply the projectors `1 - h_j` to `|+…+⟩` in clause order without
/// renormalizing.
pub fn flat_protocol_dense(instance: &CnfInstance, cut: usize) -> DenseResult<DenseFlatTrace> {
    flat_protocol_dense_with_limit(instance, cut, DEFAULT_DENSE_LIMIT)
}

pub fn flat_protocol_dense_with_limit(
    instance: &CnfInstance,
    cut: usize,
    limit: usize,
) -> DenseResult<DenseFlatTrace> {
    let n = instance.n();
    if n > limit {
        return Err(DenseError::TooManySites { n, limit });
    }
    if instance.m() > 0 && (cut == 0 || cut >= n) {
        return Err(DenseError::BadCut { cut, max: n.saturating_sub(1) });
    }
    let mut state = DenseState::uniform(n);
    let mut steps = Vec::with_capacity(instance.m());
    for (j, (mask, pattern)) in instance.index_masks().into_iter().enumerate() {
        for (x, a) in state.amplitudes.iter_mut().enumerate() {
            if x as u64 & mask == pattern {
                *a = 0.0;
            }
        }
        let norm_sq = state.norm_sq();
        let spectrum = if norm_sq > 0.0 {
            schmidt(&state.normalized(), cut)?
        } else {
            SchmidtSpectrum { cut, values: Vec::new() }
        };
        steps.push(FlatStep { clauses_applied: j + 1, spectrum, norm_sq });
    }
    Ok(DenseFlatTrace { steps, state })
}

/// `⟨ψ|P|ψ⟩` for a real state.
///
/// With `P|x⟩ = i^{#Y} (-1)^{s·x} |x ⊕ f⟩` the expectation is
/// `i^{#Y} Σ_x ψ_{x⊕f} ψ_x (-1)^{s·x}`; the sum is real, so strings with an
/// odd number of Y give zero.
pub fn pauli_expectation(state: &DenseState, pauli: &PauliString) -> DenseResult<f64> {
    if pauli.len() != state.n {
        return Err(DenseError::PauliLength { expected: state.n, found: pauli.len() });
    }
    let ny = pauli.y_count();
    if ny % 2 == 1 {
        return Ok(0.0);
    }
    let flip = pauli.flip_mask() as usize;
    let sign = pauli.sign_mask() as usize;
    let psi = &state.amplitudes;
    let sum: f64 = (0..psi.len())
        .map(|x| {
            let v = psi[x ^ flip] * psi[x];
            if (x & sign).count_ones() % 2 == 1 { -v } else { v }
        })
        .sum();
    Ok(if ny % 4 == 2 { -sum } else { sum })
}
