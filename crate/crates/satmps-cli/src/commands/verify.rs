use std::fs::File;
use std::io::BufReader;

use anyhow::Context;
use satmps::mps::{read_snapshot, verify_certificate};
use satmps::sat::parse_dimacs;

use crate::commands::flat::CERTIFICATE_TOLERANCE;
use crate::config::ExperimentConfig;
use crate::table::{num, Report, Table};
use crate::UsageError;

/// Certificate check of `verify.mps` against `verify.cnf`. A false verdict is
/// reported as a failure.
pub fn run(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let (Some(mps_path), Some(cnf_path)) = (&cfg.verify.mps, &cfg.verify.cnf) else {
        return Err(UsageError("verify needs both --mps and --cnf".into()).into());
    };
    let text = std::fs::read_to_string(cnf_path).with_context(|| format!("reading {}", cnf_path.display()))?;
    let inst = parse_dimacs(&text).map_err(|e| UsageError(format!("{}: {e}", cnf_path.display())))?;
    let file = File::open(mps_path).with_context(|| format!("opening {}", mps_path.display()))?;
    let mps = read_snapshot(BufReader::new(file)).with_context(|| format!("reading {}", mps_path.display()))?;
    if mps.n() != inst.n() {
        return Err(UsageError(format!("snapshot has {} sites but the instance has {} variables", mps.n(), inst.n()))
            .into());
    }
    let cert = verify_certificate(&mps, &inst, cfg.verify.tolerance.unwrap_or(CERTIFICATE_TOLERANCE))?;
    let mut table = Table::new(&["n", "m", "verdict", "count", "min_fidelity", "worst_clause"]);
    table.push(vec![
        inst.n().to_string(),
        inst.m().to_string(),
        cert.invariant.to_string(),
        num(cert.count.round()),
        num(cert.min_fidelity),
        cert.worst_clause.map_or_else(String::new, |c| (c + 1).to_string()),
    ]);
    let mut report = Report::default();
    report.messages.push(format!("verdict={} count={}", cert.invariant, cert.count.round()));
    if !cert.invariant {
        report.failures.push(format!(
            "projector {} moves the state (fidelity {})",
            cert.worst_clause.map_or(0, |c| c + 1),
            cert.min_fidelity
        ));
    }
    report.tables = vec![("", table)];
    Ok(report)
}
