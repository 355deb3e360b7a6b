//! Seeded experiment harness behind the `satmps` binary.
//!
//! Each subcommand maps an [`ExperimentConfig`] to a [`Report`]: CSV tables,
//! an optional JSON manifest, side files and a list of failed cross-checks.
//! Nothing in a report depends on the worker count or wall-clock time, so
//! identical configs give identical bytes.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

pub mod commands;
pub mod config;
pub mod seeds;
pub mod table;

pub use config::{Backend, Ensemble, ExperimentConfig};
pub use seeds::{derive_seed, jobs, Job};
pub use table::{Report, Table};

/// Bad invocation: unreadable config, inconsistent inputs. Exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Write seeded DIMACS instances and a manifest.
    Generate,
    /// Imaginary-time evolution traces.
    Evolve,
    /// Clause-by-clause projection with a counting certificate.
    Flat,
    /// Closed-form constants and statistical model curves.
    Models,
    /// Stabilizer Rényi entropies along imaginary time.
    Magic,
    /// Check a snapshot against an instance.
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Generate => "generate",
            Command::Evolve => "evolve",
            Command::Flat => "flat",
            Command::Models => "models",
            Command::Magic => "magic",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "satmps", version, about = "Random 3-SAT experiments with matrix-product states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML or JSON experiment config; defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed, overriding the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Primary output path (a directory for `generate`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub backend: Option<Backend>,
    /// Snapshot file for `verify`.
    #[arg(long, global = true)]
    pub mps: Option<PathBuf>,
    /// DIMACS file for `verify`.
    #[arg(long, global = true)]
    pub cnf: Option<PathBuf>,
    /// Omit the timestamp comment line from CSV output.
    #[arg(long, global = true)]
    pub no_stamp: bool,
}

impl Cli {
    /// The config file with command-line overrides applied.
    pub fn resolve(&self) -> Result<ExperimentConfig, UsageError> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_path(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        if let Some(b) = self.backend {
            cfg.backend = b;
        }
        if let Some(p) = &self.mps {
            cfg.verify.mps = Some(p.clone());
        }
        if let Some(p) = &self.cnf {
            cfg.verify.cnf = Some(p.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Run one subcommand without touching the filesystem beyond its inputs.
pub fn run(command: Command, cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    match command {
        Command::Generate => commands::generate::run(cfg),
        Command::Evolve => commands::evolve::run(cfg),
        Command::Flat => commands::flat::run(cfg),
        Command::Models => commands::models::run(cfg),
        Command::Magic => commands::magic::run(cfg),
        Command::Verify => commands::verify::run(cfg),
    }
}

/// Default primary output for a subcommand.
pub fn default_out(command: Command) -> PathBuf {
    match command {
        Command::Generate => PathBuf::from("instances"),
        c => PathBuf::from(format!("{}.csv", c.name())),
    }
}

/// Run, write outputs and print messages. Exit code 0 on success, 1 on a
/// failed cross-check or runtime error, 2 on a usage error.
pub fn main_with(cli: Cli) -> ExitCode {
    let cfg = match cli.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("satmps: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run(cli.command, &cfg) {
        Ok(r) => r,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("satmps: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("satmps: {e:#}");
            return ExitCode::FAILURE;
        }
    };
    let stamp = (!cli.no_stamp).then(|| {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        format!("satmps {} unix={secs}", cli.command.name())
    });
    let out = cfg.out.clone().or_else(|| (cli.command != Command::Verify).then(|| default_out(cli.command)));
    if let Some(out) = out {
        if let Err(e) = commands::write_outputs(cli.command, &report, &out, stamp.as_deref()) {
            eprintln!("satmps: {e:#}");
            return ExitCode::FAILURE;
        }
    }
    for m in &report.messages {
        println!("{m}");
    }
    for f in &report.failures {
        eprintln!("satmps: check failed: {f}");
    }
    if report.ok() { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}

/// Map `f` over `items` on a pool of `workers` threads, keeping input order.
pub fn par_map<T, R, F>(workers: usize, items: &[T], f: F) -> anyhow::Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> anyhow::Result<R> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    pool.install(|| items.par_iter().map(f).collect())
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
