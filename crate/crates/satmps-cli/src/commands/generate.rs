use satmps::sat::{count_dpll, write_dimacs};
use serde_json::json;

use crate::commands::manifest;
use crate::config::ExperimentConfig;
use crate::table::Report;
use crate::{jobs, par_map, Command};

/// `n{n}_m{m}_i{index}.cnf` for every job, plus `manifest.json`.
pub fn run(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let jobs = jobs(cfg);
    let built = par_map(cfg.workers, &jobs, |job| {
        let inst = job.instance(cfg)?;
        let solutions = (job.n <= cfg.count_limit).then(|| count_dpll(&inst));
        Ok((inst, solutions))
    })?;
    let mut report = Report::default();
    let mut entries = Vec::with_capacity(jobs.len());
    for (job, (inst, solutions)) in jobs.iter().zip(built) {
        let file = format!("n{}_m{}_i{:04}.cnf", job.n, job.m, job.index);
        entries.push(json!({
            "file": file,
            "n": job.n,
            "m": job.m,
            "alpha": job.alpha(),
            "seed": job.seed,
            "index": job.index,
            "solutions": solutions,
        }));
        report.files.push((file, write_dimacs(&inst).into_bytes()));
    }
    report.messages.push(format!("generated {} instances", jobs.len()));
    report.manifest = Some(manifest(Command::Generate, cfg, entries.into()));
    Ok(report)
}
