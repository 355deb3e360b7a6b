pub mod evolve;
pub mod flat;
pub mod generate;
pub mod magic;
pub mod models;
pub mod verify;

use std::path::Path;

use anyhow::Context;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::table::{num, write_json, write_report, Report};
use crate::{Command, Job};

/// The `(seed, n, m, α)` prefix every result row starts with.
pub(crate) const KEY: [&str; 4] = ["seed", "n", "m", "alpha"];

pub(crate) fn key(job: &Job) -> Vec<String> {
    vec![job.seed.to_string(), job.n.to_string(), job.m.to_string(), num(job.alpha())]
}

pub(crate) fn header(rest: &[&'static str]) -> Vec<&'static str> {
    KEY.iter().chain(rest).copied().collect()
}

/// Config echo and file list shared by every manifest.
pub(crate) fn manifest(command: Command, cfg: &ExperimentConfig, entries: serde_json::Value) -> serde_json::Value {
    let echo = ExperimentConfig { out: None, workers: 0, ..cfg.clone() };
    json!({
        "command": command.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "master_seed": cfg.seed,
        "config": echo,
        "entries": entries,
    })
}

/// `generate` treats `out` as a directory; the rest write CSV files named
/// after `out` with side files in its directory.
pub fn write_outputs(command: Command, report: &Report, out: &Path, stamp: Option<&str>) -> anyhow::Result<()> {
    let dir = if command == Command::Generate {
        out.to_path_buf()
    } else {
        out.parent().map(Path::to_path_buf).unwrap_or_default()
    };
    if !dir.as_os_str().is_empty() {
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    for (name, bytes) in &report.files {
        let path = dir.join(name);
        std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
    }
    if command == Command::Generate {
        if let Some(m) = &report.manifest {
            write_json(&dir.join("manifest.json"), m)?;
        }
        return Ok(());
    }
    write_report(report, out, stamp)?;
    Ok(())
}
