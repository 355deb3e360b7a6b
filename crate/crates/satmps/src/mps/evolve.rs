use ndarray::Array3;

use super::operator::{clause_to_mpo, ClauseOperator};
use super::{
    as_left_matrix, as_right_matrix, product_plus_state, scale_cols, split, to3, Mps, MpsError,
    MpsResult, TruncationPolicy, UNDERFLOW,
};
use crate::linalg::{self, schmidt_entropy};
use crate::sat::CnfInstance;

/// What one clause application did to the state.
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct ApplyStats {
    /// Squared-norm factor picked up by the gate (before renormalization).
    pub norm_factor: f64,
    /// Relative weight thrown away by truncation, summed over bonds.
    pub discarded: f64,
}

/// Contract `op` into the state and recompress.
///
/// The center is first moved to the left end of the clause span, the MPO is
/// contracted site by site, a left-to-right QR sweep restores left isometries,
/// and a right-to-left SVD sweep truncates according to `policy`. The center
/// ends on the first site of the span.
pub fn apply_clause(
    mps: &mut Mps,
    op: &ClauseOperator,
    policy: &TruncationPolicy,
) -> MpsResult<ApplyStats> {
    let (a, c) = op.span();
    if c >= mps.n() {
        return Err(MpsError::BadSite { site: c, n: mps.n() });
    }
    if op.is_identity() {
        return Ok(ApplyStats { norm_factor: 1.0, discarded: 0.0 });
    }
    mps.move_center(a)?;
    let tensors = mps.tensors_mut();
    for (k, w) in (a..=c).zip(op.mpo()) {
        tensors[k] = contract_site(&tensors[k], w);
    }
    for k in a..c {
        let (l, _, _) = tensors[k].dim();
        let (q, rr) = linalg::qr(as_left_matrix(&tensors[k]).view());
        let chi = q.ncols();
        tensors[k] = to3(q, (l, 2, chi));
        let (_, _, r) = tensors[k + 1].dim();
        tensors[k + 1] = to3(rr.dot(&as_right_matrix(&tensors[k + 1])), (chi, 2, r));
    }
    let mut discarded = 0.0;
    for k in (a + 1..=c).rev() {
        let (_, _, r) = tensors[k].dim();
        let sp = split(as_right_matrix(&tensors[k]).view(), policy.max_bond, policy.cutoff)?;
        discarded += sp.discarded;
        let chi = sp.s.len();
        tensors[k] = to3(sp.vt, (chi, 2, r));
        let us = scale_cols(sp.u, &sp.s);
        let (l, _, _) = tensors[k - 1].dim();
        tensors[k - 1] = to3(as_left_matrix(&tensors[k - 1]).dot(&us), (l, 2, chi));
    }
    let nrm2: f64 = tensors[a].iter().map(|x| x * x).sum();
    if !(nrm2 > UNDERFLOW) || !nrm2.is_finite() {
        return Err(MpsError::NormUnderflow { clause: 0 });
    }
    tensors[a].mapv_inplace(|x| x / nrm2.sqrt());
    mps.set_center(a);
    if !policy.renormalize {
        mps.set_norm_sq(mps.norm_sq() * nrm2);
    }
    Ok(ApplyStats { norm_factor: nrm2, discarded })
}

fn contract_site(t: &Array3<f64>, w: &Array3<f64>) -> Array3<f64> {
    let (l, d, r) = t.dim();
    let (wl, wr, _) = w.dim();
    let mut out = Array3::zeros((l * wl, d, r * wr));
    for ((al, s, ar), &x) in t.indexed_iter() {
        if x == 0.0 {
            continue;
        }
        for i in 0..wl {
            for j in 0..wr {
                let y = w[[i, j, s]];
                if y != 0.0 {
                    out[[al * wl + i, s, ar * wr + j]] = x * y;
                }
            }
        }
    }
    out
}

fn at_clause(e: MpsError, clause: usize) -> MpsError {
    match e {
        MpsError::NormUnderflow { .. } => MpsError::NormUnderflow { clause },
        other => other,
    }
}

/// Which per-clause gate an imaginary-time step uses.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum GateKind {
    /// `exp(-dτ h_j)`; exact because the clause terms commute.
    #[default]
    Exact,
    /// `1 - dτ h_j`, a deliberately first-order splitting.
    Linearized,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Schedule {
    pub dtau: f64,
    pub tau_max: f64,
    /// Record every this many steps (and always at τ = 0 and the last step).
    pub record_every: usize,
    pub gate: GateKind,
    /// Discarded weight per step above which an alarm is logged.
    pub alarm_threshold: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Self { dtau: 0.05, tau_max: 12.0, record_every: 1, gate: GateKind::Exact, alarm_threshold: 1e-8 }
    }
}

impl Schedule {
    pub fn steps(&self) -> usize { (self.tau_max / self.dtau).round() as usize }
}

/// Diagnostics at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    /// Imaginary time, or the number of clauses applied in the flat protocol.
    pub time: f64,
    /// Entropy at every bond. Left empty by the flat protocol.
    pub bond_entropies: Vec<f64>,
    /// Normalized Schmidt values at the trace cut.
    pub schmidt: Vec<f64>,
    pub cut_entropy: f64,
    pub norm_sq: f64,
    pub solution_weight: Option<f64>,
    pub max_bond: usize,
    /// Truncated weight accumulated since the previous record.
    pub discarded: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvolutionTrace {
    pub cut: usize,
    pub records: Vec<TraceRecord>,
    /// `(time, discarded weight)` for steps that exceeded the alarm threshold.
    pub alarms: Vec<(f64, f64)>,
}

impl EvolutionTrace {
    pub fn times(&self) -> Vec<f64> { self.records.iter().map(|r| r.time).collect() }

    pub fn cut_entropies(&self) -> Vec<f64> { self.records.iter().map(|r| r.cut_entropy).collect() }

    /// `(τ̂, Ŝ)`: the first global maximum of the cut entropy.
    pub fn peak(&self) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for r in &self.records {
            if best.map_or(true, |(_, s)| r.cut_entropy > s) {
                best = Some((r.time, r.cut_entropy));
            }
        }
        best
    }

    /// The first interior local maximum of the cut entropy, falling back to
    /// [`Self::peak`] for monotone traces.
    pub fn bump(&self) -> Option<(f64, f64)> {
        let s = self.cut_entropies();
        first_local_max(&s).map(|i| (self.records[i].time, s[i])).or_else(|| self.peak())
    }
}

/// Index of the first `i` with `s[i-1] < s[i] >= s[i+1]`.
pub(crate) fn first_local_max(s: &[f64]) -> Option<usize> {
    (1..s.len().saturating_sub(1)).find(|&i| s[i] > s[i - 1] && s[i] >= s[i + 1])
}

/// Imaginary-time evolution of `|+…+⟩` by clause-wise gates, recording at
/// the half-chain cut `⌊n/2⌋`.
pub fn ite_run(
    instance: &CnfInstance,
    schedule: &Schedule,
    policy: &TruncationPolicy,
) -> MpsResult<EvolutionTrace> {
    ite_run_observed(instance, schedule, policy, |_, _| {})
}

/// [`ite_run`] that also hands the state to `observe` at every recorded time.
pub fn ite_run_observed(
    instance: &CnfInstance,
    schedule: &Schedule,
    policy: &TruncationPolicy,
    mut observe: impl FnMut(f64, &Mps),
) -> MpsResult<EvolutionTrace> {
    if !(schedule.dtau > 0.0 && schedule.dtau.is_finite()) {
        return Err(MpsError::BadStep(schedule.dtau));
    }
    let n = instance.n();
    let cut = n / 2;
    let ops: Vec<ClauseOperator> = instance
        .clauses()
        .iter()
        .map(|c| match schedule.gate {
            GateKind::Exact => clause_to_mpo(c, schedule.dtau),
            GateKind::Linearized => ClauseOperator::linearized(c, schedule.dtau),
        })
        .collect();
    let policy = policy.with_renormalize(true);
    let mut mps = product_plus_state(n);
    let mut trace = EvolutionTrace { cut, ..Default::default() };
    trace.records.push(ite_record(&mut mps, instance, cut, 0.0, 0.0)?);
    observe(0.0, &mps);

    let steps = schedule.steps();
    let every = schedule.record_every.max(1);
    let mut pending = 0.0;
    for step in 1..=steps {
        let tau = step as f64 * schedule.dtau;
        let mut discarded = 0.0;
        for (j, op) in ops.iter().enumerate() {
            discarded += apply_clause(&mut mps, op, &policy).map_err(|e| at_clause(e, j + 1))?.discarded;
        }
        if discarded > schedule.alarm_threshold {
            trace.alarms.push((tau, discarded));
        }
        pending += discarded;
        if step % every == 0 || step == steps {
            trace.records.push(ite_record(&mut mps, instance, cut, tau, pending)?);
            observe(tau, &mps);
            pending = 0.0;
        }
    }
    Ok(trace)
}

fn ite_record(
    mps: &mut Mps,
    instance: &CnfInstance,
    cut: usize,
    time: f64,
    discarded: f64,
) -> MpsResult<TraceRecord> {
    let n = mps.n();
    let (bond_entropies, schmidt) = if n >= 2 {
        let spectra = mps.sweep_spectra()?;
        let at_cut = normalized(&spectra[cut - 1]);
        (spectra.iter().map(|s| schmidt_entropy(s)).collect(), at_cut)
    } else {
        (Vec::new(), vec![1.0])
    };
    Ok(TraceRecord {
        time,
        cut_entropy: schmidt_entropy(&schmidt),
        bond_entropies,
        schmidt,
        norm_sq: mps.norm_sq(),
        solution_weight: Some(mps_solution_weight(mps, instance)?),
        max_bond: mps.max_bond(),
        discarded,
    })
}

fn normalized(values: &[f64]) -> Vec<f64> {
    let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 { values.iter().map(|v| v / norm).collect() } else { values.to_vec() }
}

/// Weight of the normalized state on satisfying assignments.
///
/// Up to 20 sites this sums the contracted amplitudes; beyond that the
/// projectors are applied to a copy and the surviving norm is read off.
pub fn mps_solution_weight(mps: &Mps, instance: &CnfInstance) -> MpsResult<f64> {
    if mps.n() != instance.n() {
        return Err(MpsError::SizeMismatch { mps: mps.n(), instance: instance.n() });
    }
    let mut work = mps.clone();
    work.set_norm_sq(1.0);
    if work.n() <= 20 {
        let dense = work.to_dense()?;
        return Ok(crate::dense::solution_weight(&dense, instance));
    }
    let policy = TruncationPolicy::exact().with_renormalize(false);
    for c in instance.clauses() {
        match apply_clause(&mut work, &clause_to_mpo(c, f64::INFINITY), &policy) {
            Ok(_) => {}
            Err(MpsError::NormUnderflow { .. }) => return Ok(0.0),
            Err(e) => return Err(e),
        }
    }
    Ok(work.norm_sq())
}

/// Flat protocol: apply the projectors `1 - h_j` in clause order, keeping the
/// norm in the accumulator. Records the Schmidt values at `cut` after every
/// clause; the trace has one record per clause.
pub fn flat_run(
    instance: &CnfInstance,
    policy: &TruncationPolicy,
    cut: usize,
) -> MpsResult<(Mps, EvolutionTrace)> {
    let n = instance.n();
    if instance.m() > 0 && (cut == 0 || cut >= n) {
        return Err(MpsError::BadCut { cut, max: n.saturating_sub(1) });
    }
    let policy = policy.with_renormalize(false);
    let mut mps = product_plus_state(n);
    let mut trace = EvolutionTrace { cut, ..Default::default() };
    for (j, c) in instance.clauses().iter().enumerate() {
        let stats = apply_clause(&mut mps, &clause_to_mpo(c, f64::INFINITY), &policy)
            .map_err(|e| at_clause(e, j + 1))?;
        if stats.discarded > 0.0 {
            trace.alarms.push(((j + 1) as f64, stats.discarded));
        }
        let schmidt = mps.schmidt_at(cut)?;
        trace.records.push(TraceRecord {
            time: (j + 1) as f64,
            bond_entropies: Vec::new(),
            cut_entropy: schmidt_entropy(&schmidt),
            schmidt,
            norm_sq: mps.norm_sq(),
            solution_weight: None,
            max_bond: mps.max_bond(),
            discarded: stats.discarded,
        });
    }
    Ok((mps, trace))
}
