//! Real matrix-product states in mixed canonical form.
//!
//! Site `k` (0-based) holds variable `k + 1`. Every tensor has shape
//! `(χ_left, 2, χ_right)`. Tensors left of the center are left-isometric, those
//! right of it right-isometric, and the center tensor has unit Frobenius norm.
//! The norm of the represented state lives in a separate accumulator, so the
//! flat protocol can shed weight clause by clause without underflowing the
//! tensors themselves.

mod certificate;
mod evolve;
mod operator;
mod snapshot;

pub use certificate::{verify_certificate, Certificate};
pub use evolve::{
    apply_clause, flat_run, ite_run, ite_run_observed, mps_solution_weight, ApplyStats, EvolutionTrace, GateKind,
    Schedule, TraceRecord,
};
pub use operator::{clause_to_mpo, ClauseOperator};
pub use snapshot::{read_snapshot, write_snapshot, SNAPSHOT_MAGIC};

use ndarray::{s, Array2, Array3, ArrayView2, Axis};
use thiserror::Error;

use crate::dense::DenseState;
use crate::linalg;

/// Relative singular-value floor used by exact (non-truncating) splits.
pub const EXACT_FLOOR: f64 = 1e-14;

/// A gate that leaves less than this fraction of the squared norm is taken to
/// have annihilated the state. Well below `2^-60`, well above roundoff.
pub const UNDERFLOW: f64 = 1e-20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MpsError {
    #[error("SVD failed: {0}")]
    Linalg(String),

    /// The state was annihilated by a projector, so the clause prefix is
    /// unsatisfiable (or truncation discarded all remaining weight).
    #[error("state norm underflowed after clause {clause}")]
    NormUnderflow { clause: usize },

    #[error("instance has {instance} variables, MPS has {mps} sites")]
    SizeMismatch { mps: usize, instance: usize },

    #[error("cut {cut} is outside 1..={max}")]
    BadCut { cut: usize, max: usize },

    #[error("site {site} index out of range for {n} sites")]
    BadSite { site: usize, n: usize },

    #[error("tensor shapes inconsistent at site {site}")]
    BadShape { site: usize },

    #[error("dense reconstruction of {n} sites exceeds the limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("dτ must be positive and finite, got {0}")]
    BadStep(f64),

    #[error("snapshot: {0}")]
    Snapshot(String),
}

pub type MpsResult<T> = Result<T, MpsError>;

/// Bond-dimension cap, relative singular-value cutoff and renormalization.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TruncationPolicy {
    pub max_bond: usize,
    /// Singular values below `cutoff · ‖λ‖` are discarded.
    pub cutoff: f64,
    /// Drop the norm decrement instead of folding it into the accumulator.
    pub renormalize: bool,
}

impl Default for TruncationPolicy {
    fn default() -> Self { Self { max_bond: 256, cutoff: 1e-10, renormalize: true } }
}

impl TruncationPolicy {
    /// No cap and only the numerical floor.
    pub fn exact() -> Self { Self { max_bond: usize::MAX, cutoff: EXACT_FLOOR, renormalize: true } }

    pub fn with_max_bond(self, max_bond: usize) -> Self {
        assert!(max_bond >= 1);
        Self { max_bond, ..self }
    }

    pub fn with_cutoff(self, cutoff: f64) -> Self {
        assert!(cutoff >= 0.0);
        Self { cutoff, ..self }
    }

    pub fn with_renormalize(self, renormalize: bool) -> Self { Self { renormalize, ..self } }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mps {
    tensors: Vec<Array3<f64>>,
    center: usize,
    norm_sq: f64,
}

/// `|+⟩^{⊗n}` as a bond-dimension-1 MPS.
pub fn product_plus_state(n: usize) -> Mps {
    assert!(n >= 1, "an MPS needs at least one site");
    let h = 0.5f64.sqrt();
    Mps { tensors: vec![Array3::from_elem((1, 2, 1), h); n], center: 0, norm_sq: 1.0 }
}

pub(crate) struct Split {
    pub u: Array2<f64>,
    pub s: Vec<f64>,
    pub vt: Array2<f64>,
    pub discarded: f64,
}

/// SVD of `m` keeping at most `max_bond` values above `cutoff · ‖s‖`.
/// At least one value is always kept.
pub(crate) fn split(m: ArrayView2<f64>, max_bond: usize, cutoff: f64) -> MpsResult<Split> {
    let (u, s, vt) = linalg::svd(m).map_err(MpsError::Linalg)?;
    let total: f64 = s.iter().map(|x| x * x).sum();
    let floor = cutoff * total.sqrt();
    let k = s.iter().take_while(|&&x| x > floor).count().clamp(1, max_bond.max(1)).min(s.len());
    let kept: f64 = s.iter().take(k).map(|x| x * x).sum();
    let discarded = if total > 0.0 { ((total - kept) / total).max(0.0) } else { 0.0 };
    Ok(Split {
        u: u.slice(s![.., ..k]).to_owned(),
        s: s.iter().take(k).copied().collect(),
        vt: vt.slice(s![..k, ..]).to_owned(),
        discarded,
    })
}

pub(crate) fn to3(m: Array2<f64>, shape: (usize, usize, usize)) -> Array3<f64> {
    m.as_standard_layout().into_owned().into_shape_with_order(shape).expect("reshape size")
}

pub(crate) fn as_left_matrix(t: &Array3<f64>) -> Array2<f64> {
    let (l, d, r) = t.dim();
    t.as_standard_layout().into_owned().into_shape_with_order((l * d, r)).expect("reshape size")
}

pub(crate) fn as_right_matrix(t: &Array3<f64>) -> Array2<f64> {
    let (l, d, r) = t.dim();
    t.as_standard_layout().into_owned().into_shape_with_order((l, d * r)).expect("reshape size")
}

impl Mps {
    /// Assemble an MPS from raw parts. Shapes are checked; canonical form is
    /// the caller's responsibility.
    pub fn from_parts(tensors: Vec<Array3<f64>>, center: usize, norm_sq: f64) -> MpsResult<Self> {
        let n = tensors.len();
        if n == 0 {
            return Err(MpsError::BadShape { site: 0 });
        }
        if center >= n {
            return Err(MpsError::BadSite { site: center, n });
        }
        for (k, t) in tensors.iter().enumerate() {
            let (l, d, r) = t.dim();
            let left_ok = if k == 0 { l == 1 } else { l == tensors[k - 1].dim().2 };
            if d != 2 || !left_ok || l == 0 || r == 0 || (k == n - 1 && r != 1) {
                return Err(MpsError::BadShape { site: k });
            }
        }
        Ok(Self { tensors, center, norm_sq })
    }

    /// Exact MPS of a dense state by successive SVDs, center on the last site.
    pub fn from_dense(state: &DenseState) -> MpsResult<Self> {
        let n = state.n();
        let norm_sq = state.norm_sq();
        if !(norm_sq > 0.0) {
            return Err(MpsError::NormUnderflow { clause: 0 });
        }
        let scale = norm_sq.sqrt().recip();
        let mut rest = Array2::from_shape_fn((1, 1 << n), |(_, x)| state.amplitudes()[x] * scale);
        let mut tensors = Vec::with_capacity(n);
        for _ in 0..n - 1 {
            let (l, cols) = rest.dim();
            let m = rest.as_standard_layout().into_owned().into_shape_with_order((l * 2, cols / 2)).expect("reshape size");
            let sp = split(m.view(), usize::MAX, EXACT_FLOOR)?;
            let chi = sp.s.len();
            tensors.push(to3(sp.u, (l, 2, chi)));
            rest = scale_rows(sp.vt, &sp.s);
        }
        let l = rest.nrows();
        tensors.push(to3(rest, (l, 2, 1)));
        Self::from_parts(tensors, n - 1, norm_sq)
    }

    pub fn n(&self) -> usize { self.tensors.len() }

    pub fn center(&self) -> usize { self.center }

    pub fn tensors(&self) -> &[Array3<f64>] { &self.tensors }

    /// Squared norm of the represented state.
    pub fn norm_sq(&self) -> f64 { self.norm_sq }

    /// Bond dimensions between consecutive sites (`n - 1` entries).
    pub fn bond_dims(&self) -> Vec<usize> {
        self.tensors[..self.n() - 1].iter().map(|t| t.dim().2).collect()
    }

    pub fn max_bond(&self) -> usize { self.bond_dims().into_iter().max().unwrap_or(1) }

    /// Move the orthogonality center to `site` by QR sweeps.
    pub fn move_center(&mut self, site: usize) -> MpsResult<()> {
        if site >= self.n() {
            return Err(MpsError::BadSite { site, n: self.n() });
        }
        while self.center < site {
            let k = self.center;
            let (l, _, _) = self.tensors[k].dim();
            let (q, r) = linalg::qr(as_left_matrix(&self.tensors[k]).view());
            let chi = q.ncols();
            self.tensors[k] = to3(q, (l, 2, chi));
            self.absorb_left(k + 1, &r);
            self.center += 1;
        }
        while self.center > site {
            let k = self.center;
            let (_, _, r) = self.tensors[k].dim();
            let (q, rr) = linalg::qr(as_right_matrix(&self.tensors[k]).t());
            let chi = q.ncols();
            self.tensors[k] = to3(q.reversed_axes(), (chi, 2, r));
            self.absorb_right(k - 1, &rr.reversed_axes());
            self.center -= 1;
        }
        Ok(())
    }

    /// Replace site `k` by `m · A_k`.
    fn absorb_left(&mut self, k: usize, m: &Array2<f64>) {
        let (_, _, r) = self.tensors[k].dim();
        self.tensors[k] = to3(m.dot(&as_right_matrix(&self.tensors[k])), (m.nrows(), 2, r));
    }

    /// Replace site `k` by `A_k · m`.
    fn absorb_right(&mut self, k: usize, m: &Array2<f64>) {
        let (l, _, _) = self.tensors[k].dim();
        self.tensors[k] = to3(as_left_matrix(&self.tensors[k]).dot(m), (l, 2, m.ncols()));
    }

    /// Sweep the center from the first to the last site with SVDs, dropping
    /// numerically zero singular values. Returns the Schmidt values at every
    /// bond, left to right.
    pub fn sweep_spectra(&mut self) -> MpsResult<Vec<Vec<f64>>> {
        self.move_center(0)?;
        let mut spectra = Vec::with_capacity(self.n().saturating_sub(1));
        for k in 0..self.n() - 1 {
            let (l, _, _) = self.tensors[k].dim();
            let sp = split(as_left_matrix(&self.tensors[k]).view(), usize::MAX, EXACT_FLOOR)?;
            let chi = sp.s.len();
            self.tensors[k] = to3(sp.u, (l, 2, chi));
            self.absorb_left(k + 1, &scale_rows(sp.vt, &sp.s));
            self.center = k + 1;
            spectra.push(sp.s);
        }
        Ok(spectra)
    }

    /// Normalized Schmidt values across the bond after `cut` sites.
    pub fn schmidt_at(&mut self, cut: usize) -> MpsResult<Vec<f64>> {
        if cut == 0 || cut >= self.n() {
            return Err(MpsError::BadCut { cut, max: self.n() - 1 });
        }
        self.move_center(cut - 1)?;
        let m = as_left_matrix(&self.tensors[cut - 1]);
        let mut values = linalg::singular_values(m.view()).map_err(MpsError::Linalg)?;
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        values.retain(|&v| v > EXACT_FLOOR * norm);
        if norm > 0.0 {
            values.iter_mut().for_each(|v| *v /= norm);
        }
        Ok(values)
    }

    /// Amplitude `⟨x|ψ⟩` for a big-endian basis index, including the norm
    /// accumulator.
    pub fn amplitude(&self, x: u64) -> f64 {
        let n = self.n();
        let mut v = ndarray::Array1::from_elem(1, 1.0);
        for (k, t) in self.tensors.iter().enumerate() {
            let bit = (x >> (n - 1 - k) & 1) as usize;
            v = v.dot(&t.index_axis(Axis(1), bit));
        }
        v[0] * self.norm_sq.sqrt()
    }

    /// Full contraction to a statevector, scaled by the norm accumulator.
    pub fn to_dense(&self) -> MpsResult<DenseState> {
        const LIMIT: usize = 24;
        let n = self.n();
        if n > LIMIT {
            return Err(MpsError::TooLarge { n, limit: LIMIT });
        }
        let mut acc = Array2::from_elem((1, 1), 1.0);
        for t in &self.tensors {
            let (_, _, r) = t.dim();
            let rows = acc.nrows();
            let next = acc.dot(&as_right_matrix(t));
            acc = next.into_shape_with_order((rows * 2, r)).expect("reshape size");
        }
        let scale = self.norm_sq.sqrt();
        let amps = acc.column(0).iter().map(|a| a * scale).collect();
        Ok(DenseState::new(n, amps).expect("2^n amplitudes"))
    }

    /// Largest deviation from isometry over all non-center tensors, and the
    /// deviation of the center norm from 1.
    pub fn canonical_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, t) in self.tensors.iter().enumerate() {
            let dev = if k < self.center {
                let m = as_left_matrix(t);
                identity_deviation(m.t().dot(&m))
            } else if k > self.center {
                let m = as_right_matrix(t);
                identity_deviation(m.dot(&m.t()))
            } else {
                (t.iter().map(|x| x * x).sum::<f64>() - 1.0).abs()
            };
            worst = worst.max(dev);
        }
        worst
    }

    pub(crate) fn tensors_mut(&mut self) -> &mut Vec<Array3<f64>> { &mut self.tensors }

    pub(crate) fn set_center(&mut self, center: usize) { self.center = center; }

    pub(crate) fn set_norm_sq(&mut self, norm_sq: f64) { self.norm_sq = norm_sq; }

    /// `⟨ψ|ψ⟩` of the tensor network alone, by transfer matrices.
    pub(crate) fn tensor_norm_sq(&self) -> f64 { self.diagonal_expectation(&[]) }

    /// `⟨ψ|O|ψ⟩` of the tensors for `O` a product of single-site diagonal
    /// operators given as `(site, [d0, d1])`, by left-to-right transfer
    /// matrices. Makes no canonical-form assumption.
    pub(crate) fn diagonal_expectation(&self, ops: &[(usize, [f64; 2])]) -> f64 {
        let mut env = Array2::from_elem((1, 1), 1.0);
        for (k, t) in self.tensors.iter().enumerate() {
            let diag = ops.iter().find(|(s, _)| *s == k).map(|&(_, d)| d).unwrap_or([1.0, 1.0]);
            let (_, _, r) = t.dim();
            let mut next = Array2::zeros((r, r));
            for (s, &w) in diag.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let a = t.index_axis(Axis(1), s);
                let half = env.dot(&a);
                next.scaled_add(w, &a.t().dot(&half));
            }
            env = next;
        }
        env[[0, 0]]
    }
}

fn identity_deviation(g: Array2<f64>) -> f64 {
    g.indexed_iter()
        .map(|((i, j), &v)| (v - if i == j { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max)
}

pub(crate) fn scale_rows(mut m: Array2<f64>, s: &[f64]) -> Array2<f64> {
    for (mut row, &x) in m.rows_mut().into_iter().zip(s) {
        row *= x;
    }
    m
}

pub(crate) fn scale_cols(mut m: Array2<f64>, s: &[f64]) -> Array2<f64> {
    for (mut col, &x) in m.columns_mut().into_iter().zip(s) {
        col *= x;
    }
    m
}

/// Half-chain style entropies at every bond, obtained by sweeping the center
/// across the chain on a copy.
pub fn bond_entropies(mps: &Mps) -> MpsResult<Vec<f64>> {
    Ok(bond_spectra(mps)?.iter().map(|s| linalg::schmidt_entropy(s)).collect())
}

/// Schmidt values at every bond, left to right.
pub fn bond_spectra(mps: &Mps) -> MpsResult<Vec<Vec<f64>>> {
    mps.clone().sweep_spectra()
}
