use satmps::dense::{build_energy_diagonal, ite_evolve, DEFAULT_DENSE_LIMIT};
use satmps::magic::{
    exact_stabilizer_entropies, markov_m2, sample_m1, MagicEstimate, MarkovConfig, EXACT_MAGIC_LIMIT,
};
use satmps::mps::{bond_entropies, ite_run_observed, Mps};
use satmps::sat::CnfInstance;

use crate::commands::{header, key, manifest};
use crate::config::{Backend, ExperimentConfig};
use crate::seeds::child_seed;
use crate::table::{num, Report, Table};
use crate::{jobs, par_map, Command, Job, UsageError};

/// States at each requested τ, from the closed-form dense evolution or from
/// the MPS evolution on the `dτ` grid (nearest grid point).
pub fn states_at(inst: &CnfInstance, taus: &[f64], cfg: &ExperimentConfig) -> anyhow::Result<Vec<(f64, Mps)>> {
    if cfg.backend == Backend::Dense {
        if inst.n() > DEFAULT_DENSE_LIMIT {
            return Err(UsageError(format!("dense backend limited to n <= {DEFAULT_DENSE_LIMIT}")).into());
        }
        let diag = build_energy_diagonal(inst)?;
        return taus.iter().map(|&t| Ok((t, Mps::from_dense(&ite_evolve(&diag, t)?)?))).collect();
    }
    let tau_max = taus.iter().copied().fold(0.0, f64::max);
    let schedule = satmps::mps::Schedule { tau_max, record_every: 1, ..cfg.schedule() };
    let mut slots: Vec<Option<(f64, Mps)>> = vec![None; taus.len()];
    ite_run_observed(inst, &schedule, &cfg.policy(), |time, mps| {
        for (slot, &t) in slots.iter_mut().zip(taus) {
            if slot.is_none() && (time - t).abs() <= schedule.dtau / 2.0 {
                *slot = Some((time, mps.clone()));
            }
        }
    })?;
    Ok(slots.into_iter().flatten().collect())
}

struct Row {
    tau: f64,
    entropy: f64,
    method: &'static str,
    order: u8,
    value: f64,
    std_error: f64,
    samples: usize,
    agrees: Option<bool>,
}

fn run_job(job: &Job, cfg: &ExperimentConfig) -> anyhow::Result<Vec<Row>> {
    let inst = job.instance(cfg)?;
    let cut = cfg.cut_for(inst.n());
    let mut rows = Vec::new();
    for (k, (tau, mps)) in states_at(&inst, &cfg.magic.taus, cfg)?.into_iter().enumerate() {
        let entropy = if inst.n() >= 2 { bond_entropies(&mps)?[cut - 1] } else { 0.0 };
        let exact = if inst.n() <= EXACT_MAGIC_LIMIT {
            Some(exact_stabilizer_entropies(&mps.to_dense()?)?)
        } else {
            None
        };
        let mut push = |method, order, value, std_error, samples, agrees| {
            rows.push(Row { tau, entropy, method, order, value, std_error, samples, agrees })
        };
        if let Some((m1, m2)) = exact {
            push("exact", 1, m1, 0.0, 0, None);
            push("exact", 2, m2, 0.0, 0, None);
        }
        let check = |e: &MagicEstimate, reference: Option<f64>| reference.map(|x| e.agrees_with(x, cfg.magic.sigma));
        if cfg.magic.samples > 0 {
            let e = sample_m1(&mps, cfg.magic.samples, child_seed(job.seed, 2 * k as u64))?;
            let a = check(&e, exact.map(|x| x.0));
            push("sampled", 1, e.value, e.std_error, e.samples, a);
        }
        if cfg.magic.markov_steps > 0 {
            let mc = MarkovConfig { steps: cfg.magic.markov_steps, batches: cfg.magic.batches, burn_in: None };
            let e = markov_m2(&mps, &mc, child_seed(job.seed, 2 * k as u64 + 1))?;
            let a = check(&e, exact.map(|x| x.1));
            push("markov", 2, e.value, e.std_error, e.samples, a);
        }
    }
    Ok(rows)
}

/// One row per `(instance, τ, method, order)`.
pub fn run(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let jobs = jobs(cfg);
    let results = par_map(cfg.workers, &jobs, |j| run_job(j, cfg))?;
    let mut table = Table::new(&header(&[
        "tau",
        "entropy",
        "method",
        "order",
        "value",
        "std_error",
        "samples",
        "agrees",
    ]));
    let mut report = Report::default();
    for (job, rows) in jobs.iter().zip(results) {
        for r in rows {
            if r.agrees == Some(false) {
                report.failures.push(format!(
                    "seed {} n {} tau {}: {} M{} = {} ± {} disagrees with the exact value",
                    job.seed, job.n, r.tau, r.method, r.order, r.value, r.std_error
                ));
            }
            let mut row = key(job);
            row.extend([
                num(r.tau),
                num(r.entropy),
                r.method.to_string(),
                r.order.to_string(),
                num(r.value),
                num(r.std_error),
                r.samples.to_string(),
                r.agrees.map_or_else(String::new, |a| a.to_string()),
            ]);
            table.push(row);
        }
    }
    report.messages.push(format!("magic for {} instances", jobs.len()));
    report.tables = vec![("", table)];
    report.manifest = Some(manifest(Command::Magic, cfg, serde_json::json!([""])));
    Ok(report)
}
