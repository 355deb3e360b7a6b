//! CSV tables and run reports.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;

/// Shortest round-trip text for a float. Non-finite values are written as
/// an empty field.
pub fn num(x: f64) -> String {
    if x.is_finite() { format!("{x:?}") } else { String::new() }
}

pub fn opt(x: Option<f64>) -> String { x.map_or_else(String::new, num) }

/// A fixed-schema table. Every row must match the header width.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self { Self { header: header.to_vec(), rows: Vec::new() } }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width for {:?}", self.header);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> { self.header.iter().position(|h| *h == name) }

    /// Write RFC-4180 CSV, preceded by `stamp` as a `#` comment line.
    pub fn write_to<W: Write>(&self, out: W, stamp: Option<&str>) -> anyhow::Result<()> {
        let mut out = out;
        if let Some(s) = stamp {
            writeln!(out, "# {s}")?;
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf, None).expect("in-memory write");
        String::from_utf8(buf).expect("fields are UTF-8")
    }
}

/// Everything a subcommand produced.
#[derive(Clone, Debug, Default)]
pub struct Report {
    /// `(suffix, table)`; the empty suffix is the primary output.
    pub tables: Vec<(&'static str, Table)>,
    pub manifest: Option<serde_json::Value>,
    /// Failed internal cross-checks.
    pub failures: Vec<String>,
    /// Lines for standard output.
    pub messages: Vec<String>,
    /// Side files `(name, bytes)`, written beside the primary output.
    pub files: Vec<(String, Vec<u8>)>,
}

impl Report {
    pub fn table(&self, suffix: &str) -> Option<&Table> {
        self.tables.iter().find(|(s, _)| *s == suffix).map(|(_, t)| t)
    }

    pub fn ok(&self) -> bool { self.failures.is_empty() }
}

/// `results.csv` with suffix `summary` becomes `results_summary.csv`.
pub fn sibling(primary: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = primary.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = if suffix.is_empty() { format!("{stem}.{ext}") } else { format!("{stem}_{suffix}.{ext}") };
    primary.with_file_name(name)
}

/// Write every table next to `primary`, plus the manifest as JSON.
pub fn write_report(report: &Report, primary: &Path, stamp: Option<&str>) -> anyhow::Result<Vec<PathBuf>> {
    if let Some(dir) = primary.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut written = Vec::new();
    for (suffix, table) in &report.tables {
        let path = sibling(primary, suffix, "csv");
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        table.write_to(BufWriter::new(file), stamp)?;
        written.push(path);
    }
    if let Some(m) = &report.manifest {
        let path = sibling(primary, "manifest", "json");
        write_json(&path, m)?;
        written.push(path);
    }
    Ok(written)
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting_follows_rfc4180() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x,y".into(), "say \"hi\"".into()]);
        assert_eq!(t.to_csv_string(), "a,b\r\n\"x,y\",\"say \"\"hi\"\"\"\r\n");
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 2.0f64.powi(60)] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(f64::NAN), "");
    }

    #[test]
    fn sibling_names() {
        let p = Path::new("out/run.csv");
        assert_eq!(sibling(p, "summary", "csv"), Path::new("out/run_summary.csv"));
        assert_eq!(sibling(p, "", "csv"), Path::new("out/run.csv"));
    }
}
