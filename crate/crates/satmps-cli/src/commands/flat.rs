use satmps::mps::{flat_run, verify_certificate, write_snapshot, MpsError};
use satmps::sat::{count_dpll, write_dimacs};

use crate::commands::{header, key, manifest};
use crate::config::ExperimentConfig;
use crate::table::{num, Report, Table};
use crate::{jobs, par_map, Command, Job};

/// Certificate tolerance on `1 - ⟨P_j⟩`.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
struct Step {
    clause: usize,
    entropy: f64,
    norm_sq: f64,
    max_bond: usize,
    discarded: f64,
}

struct JobResult {
    job: Job,
    steps: Vec<Step>,
    count: f64,
    verdict: bool,
    min_fidelity: f64,
    exact: Option<u64>,
    files: Vec<(String, Vec<u8>)>,
}

fn run_job(job: &Job, cfg: &ExperimentConfig) -> anyhow::Result<JobResult> {
    let inst = job.instance(cfg)?;
    let n = inst.n();
    let exact = (n <= cfg.count_limit).then(|| count_dpll(&inst));
    let mut steps = vec![Step { clause: 0, entropy: 0.0, norm_sq: 1.0, max_bond: 1, discarded: 0.0 }];
    let mut files = Vec::new();
    let stem = format!("n{}_m{}_i{:04}", job.n, job.m, job.index);
    let (count, verdict, min_fidelity) = match flat_run(&inst, &cfg.policy(), cfg.cut_for(n)) {
        Ok((mps, trace)) => {
            steps.extend(trace.records.iter().map(|r| Step {
                clause: r.time as usize,
                entropy: r.cut_entropy,
                norm_sq: r.norm_sq,
                max_bond: r.max_bond,
                discarded: r.discarded,
            }));
            let cert = verify_certificate(&mps, &inst, CERTIFICATE_TOLERANCE)?;
            if cfg.snapshots {
                let mut bytes = Vec::new();
                write_snapshot(&mps, &mut bytes)?;
                files.push((format!("{stem}.mps"), bytes));
            }
            (cert.count, cert.invariant, cert.min_fidelity)
        }
        // The zero vector is fixed by every projector, so the certificate
        // holds with count 0.
        Err(MpsError::NormUnderflow { clause }) => {
            steps.push(Step { clause, entropy: 0.0, norm_sq: 0.0, max_bond: 0, discarded: 0.0 });
            (0.0, true, 1.0)
        }
        Err(e) => return Err(e.into()),
    };
    if cfg.snapshots {
        files.push((format!("{stem}.cnf"), write_dimacs(&inst).into_bytes()));
    }
    Ok(JobResult { job: *job, steps, count, verdict, min_fidelity, exact, files })
}

/// Per-clause trace, one summary row per instance, optional snapshots.
pub fn run(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let jobs = jobs(cfg);
    let results = par_map(cfg.workers, &jobs, |j| run_job(j, cfg))?;
    let mut trace =
        Table::new(&header(&["clause", "entropy", "norm_sq", "count_estimate", "max_bond", "discarded"]));
    let mut summary = Table::new(&header(&[
        "chi",
        "count",
        "verdict",
        "min_fidelity",
        "exact_count",
        "count_match",
    ]));
    let mut report = Report::default();
    for r in results {
        let scale = (1u64 << r.job.n) as f64;
        for s in &r.steps {
            let mut row = key(&r.job);
            row.extend([
                s.clause.to_string(),
                num(s.entropy),
                num(s.norm_sq),
                num(s.norm_sq * scale),
                s.max_bond.to_string(),
                num(s.discarded),
            ]);
            trace.push(row);
        }
        let rounded = r.count.round();
        let matches = r.exact.map(|e| rounded == e as f64);
        let mut row = key(&r.job);
        row.extend([
            cfg.chi.to_string(),
            num(rounded),
            r.verdict.to_string(),
            num(r.min_fidelity),
            r.exact.map_or_else(String::new, |e| e.to_string()),
            matches.map_or_else(String::new, |m| m.to_string()),
        ]);
        summary.push(row);
        if r.verdict && matches == Some(false) {
            report.failures.push(format!(
                "seed {} n {} m {}: certified count {rounded} but exact count {}",
                r.job.seed,
                r.job.n,
                r.job.m,
                r.exact.unwrap_or(0)
            ));
        }
        report.files.extend(r.files);
    }
    report.messages.push(format!("projected {} instances", jobs.len()));
    report.tables = vec![("", trace), ("summary", summary)];
    report.manifest = Some(manifest(Command::Flat, cfg, serde_json::json!(["", "summary"])));
    Ok(report)
}
