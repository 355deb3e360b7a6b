use satmps::dense::{build_energy_diagonal, ite_evolve, schmidt, DEFAULT_DENSE_LIMIT};
use satmps::mps::ite_run;
use satmps::sat::CnfInstance;

use crate::commands::{header, key, manifest};
use crate::config::{Backend, ExperimentConfig};
use crate::table::{num, opt, Report, Table};
use crate::{jobs, par_map, Command, Job};

/// Largest `n` cross-checked against the dense oracle.
pub const CROSS_CHECK_LIMIT: usize = 12;

/// One grid point of either backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub tau: f64,
    pub entropy: f64,
    pub norm_sq: f64,
    pub solution_weight: f64,
    pub max_bond: usize,
    pub discarded: f64,
}

/// Closed-form dense trace at the MPS grid `k·dτ`, `k = 0, e, 2e, …` plus the
/// final step.
pub fn dense_trace(inst: &CnfInstance, cfg: &ExperimentConfig) -> anyhow::Result<Vec<Point>> {
    let diag = build_energy_diagonal(inst)?;
    let cut = cfg.cut_for(inst.n());
    let schedule = cfg.schedule();
    let steps = schedule.steps();
    let every = schedule.record_every;
    let e0 = diag.min_energy();
    let mut out = Vec::new();
    for k in (0..=steps).filter(|k| k % every == 0 || *k == steps) {
        let tau = k as f64 * schedule.dtau;
        let state = ite_evolve(&diag, tau)?;
        let spectrum = schmidt(&state, cut)?;
        let mean: f64 = diag.energies().iter().map(|&e| (-2.0 * tau * (e - e0) as f64).exp()).sum::<f64>()
            / diag.energies().len() as f64;
        out.push(Point {
            tau,
            entropy: spectrum.entropy(),
            norm_sq: mean * (-2.0 * tau * e0 as f64).exp(),
            solution_weight: diag.solution_weight(&state),
            max_bond: spectrum.rank(),
            discarded: 0.0,
        });
    }
    Ok(out)
}

pub fn mps_trace(inst: &CnfInstance, cfg: &ExperimentConfig) -> anyhow::Result<Vec<Point>> {
    let trace = ite_run(inst, &cfg.schedule(), &cfg.policy())?;
    Ok(trace
        .records
        .into_iter()
        .map(|r| Point {
            tau: r.time,
            entropy: r.cut_entropy,
            norm_sq: r.norm_sq,
            solution_weight: r.solution_weight.unwrap_or(f64::NAN),
            max_bond: r.max_bond,
            discarded: r.discarded,
        })
        .collect())
}

/// `(τ, S)` at the first global maximum of the entropy.
pub fn peak(points: &[Point]) -> (f64, f64) {
    points.iter().fold((0.0, f64::NEG_INFINITY), |best, p| if p.entropy > best.1 { (p.tau, p.entropy) } else { best })
}

/// `(τ̂, Ŝ)` at the first interior local maximum; `None` when the entropy
/// never turns over inside the grid.
pub fn bump(points: &[Point]) -> Option<(f64, f64)> {
    points
        .windows(3)
        .find(|w| w[1].entropy > w[0].entropy && w[1].entropy >= w[2].entropy)
        .map(|w| (w[1].tau, w[1].entropy))
}

struct JobResult {
    job: Job,
    traces: Vec<(&'static str, Vec<Point>)>,
    delta: Option<f64>,
}

fn run_job(job: &Job, cfg: &ExperimentConfig) -> anyhow::Result<JobResult> {
    let inst = job.instance(cfg)?;
    if cfg.cut.is_none() && inst.n() < 2 {
        anyhow::bail!("n = {} has no half cut", inst.n());
    }
    let mut traces = Vec::new();
    let dense_fits = job.n <= DEFAULT_DENSE_LIMIT;
    match cfg.backend {
        Backend::Dense if !dense_fits => {
            return Err(crate::UsageError(format!("dense backend limited to n <= {DEFAULT_DENSE_LIMIT}")).into())
        }
        Backend::Dense => traces.push(("dense", dense_trace(&inst, cfg)?)),
        Backend::Mps => traces.push(("mps", mps_trace(&inst, cfg)?)),
        Backend::Both => {
            traces.push(("mps", mps_trace(&inst, cfg)?));
            if job.n <= CROSS_CHECK_LIMIT {
                traces.push(("dense", dense_trace(&inst, cfg)?));
            }
        }
    }
    let delta = (traces.len() == 2).then(|| {
        traces[0].1.iter().zip(&traces[1].1).map(|(a, b)| (a.entropy - b.entropy).abs()).fold(0.0, f64::max)
    });
    Ok(JobResult { job: *job, traces, delta })
}

/// Per-τ rows in the primary table, one summary row per job and backend.
pub fn run(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let jobs = jobs(cfg);
    let results = par_map(cfg.workers, &jobs, |j| run_job(j, cfg))?;
    let mut trace = Table::new(&header(&[
        "backend",
        "tau",
        "entropy",
        "norm_sq",
        "solution_weight",
        "max_bond",
        "discarded",
    ]));
    let mut summary = Table::new(&header(&[
        "backend",
        "tau_hat",
        "s_hat",
        "s_max",
        "s_final",
        "solution_weight_final",
        "max_abs_delta_s",
        "agree",
    ]));
    let mut report = Report::default();
    for r in &results {
        for (backend, points) in &r.traces {
            for p in points {
                let mut row = key(&r.job);
                row.extend([
                    backend.to_string(),
                    num(p.tau),
                    num(p.entropy),
                    num(p.norm_sq),
                    num(p.solution_weight),
                    p.max_bond.to_string(),
                    num(p.discarded),
                ]);
                trace.push(row);
            }
            let bumped = bump(points);
            let last = points.last().expect("trace includes tau = 0");
            let agree = r.delta.map(|d| d <= cfg.tolerance);
            let mut row = key(&r.job);
            row.extend([
                backend.to_string(),
                opt(bumped.map(|b| b.0)),
                opt(bumped.map(|b| b.1)),
                num(peak(points).1),
                num(last.entropy),
                num(last.solution_weight),
                opt(r.delta),
                agree.map_or_else(String::new, |a| a.to_string()),
            ]);
            summary.push(row);
        }
        if let Some(d) = r.delta.filter(|&d| !(d <= cfg.tolerance)) {
            report.failures.push(format!(
                "seed {} n {} m {}: backends differ by {d:e} > {:e}",
                r.job.seed, r.job.n, r.job.m, cfg.tolerance
            ));
        }
    }
    report.messages.push(format!("evolved {} instances", results.len()));
    report.tables = vec![("", trace), ("summary", summary)];
    report.manifest = Some(manifest(Command::Evolve, cfg, serde_json::json!(["", "summary"])));
    Ok(report)
}
