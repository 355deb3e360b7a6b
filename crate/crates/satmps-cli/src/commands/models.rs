use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use satmps::dense::{flat_protocol_dense, DEFAULT_DENSE_LIMIT};
use satmps::models::{
    alpha_sharp, closed_form_mean_ln_omega, critical_alpha_star, diagonal_model_entropy, empirical_row_statistics,
    initial_schmidt_constants, model_entropy_curve, random_combinatorial_entropy, row_model_simulate,
    DiagonalModelParams, ReservoirCurve, RowModelConfig, RowStats,
};
use satmps::sat::{random_instance, CnfInstance};

use crate::commands::manifest;
use crate::config::ExperimentConfig;
use crate::seeds::derive_seed;
use crate::table::{num, Report, Table};
use crate::{par_map, Command, UsageError};

const DIAGONAL_STREAM: u64 = 1 << 48;
const ROW_STREAM: u64 = 2 << 48;
const OVERLAY_STREAM: u64 = 3 << 48;

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, var.sqrt())
}

fn constants() -> anyhow::Result<(Table, Vec<String>)> {
    let sc = initial_schmidt_constants();
    let values = [
        ("alpha_star_k3", critical_alpha_star(3)?),
        ("alpha_star_k4", critical_alpha_star(4)?),
        ("alpha_sharp", alpha_sharp()),
        ("schmidt_a", sc.a),
        ("schmidt_b", sc.b),
        ("schmidt_theta", sc.theta),
        ("schmidt_alpha", sc.alpha),
        ("a2_plus_b2", sc.a * sc.a + sc.b * sc.b),
    ];
    let mut t = Table::new(&["name", "value"]);
    let mut failures = Vec::new();
    for (name, v) in values {
        t.push(vec![name.to_string(), num(v)]);
    }
    let worst = sc.residuals().iter().fold(0.0f64, |a, r| a.max(r.abs()));
    if worst > 1e-10 {
        failures.push(format!("Schmidt constants leave residual {worst:e}"));
    }
    Ok((t, failures))
}

fn diagonal(cfg: &ExperimentConfig) -> anyhow::Result<Table> {
    let m = &cfg.models;
    let cells: Vec<(usize, usize)> =
        m.diagonal_n.iter().flat_map(|&n| (0..m.fillings.len()).map(move |k| (n, k))).collect();
    let rows = par_map(cfg.workers, &cells, |&(n, k)| {
        let params = DiagonalModelParams::new(n, m.fillings[k])?;
        let model = diagonal_model_entropy(&params);
        let seed = derive_seed(cfg.seed, DIAGONAL_STREAM | (n as u64) << 16 | k as u64, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = (0..m.diagonal_samples)
            .map(|_| random_combinatorial_entropy(&params, &mut rng))
            .collect::<Result<Vec<f64>, _>>()?;
        let (mean, sd) = mean_sd(&samples);
        Ok(vec![
            n.to_string(),
            num(params.f),
            num(params.lambda()),
            num(model.mean),
            num(model.lower),
            num(model.upper),
            num(mean),
            num(sd),
            samples.len().to_string(),
        ])
    })?;
    let mut t = Table::new(&[
        "n",
        "f",
        "lambda",
        "model_mean",
        "lower",
        "upper",
        "sample_mean",
        "sample_sd",
        "samples",
    ]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

fn reservoir_curves(cfg: &ExperimentConfig, ns: &[usize]) -> anyhow::Result<Vec<ReservoirCurve>> {
    par_map(cfg.workers, ns, |&n| {
        Ok(model_entropy_curve(n, (cfg.models.density_max * n as f64).ceil() as usize)?)
    })
}

fn reservoir(cfg: &ExperimentConfig) -> anyhow::Result<(Table, Table)> {
    let curves = reservoir_curves(cfg, &cfg.models.reservoir_n)?;
    let mut t = Table::new(&[
        "n",
        "m",
        "alpha",
        "n_active",
        "triangle_factor",
        "correlations",
        "ln_dim",
        "entropy",
    ]);
    let mut peaks = Table::new(&["n", "alpha_hat", "s_hat", "s_hat_per_n"]);
    for c in &curves {
        for s in &c.states {
            t.push(vec![
                c.n.to_string(),
                s.m.to_string(),
                num(s.m as f64 / c.n as f64),
                num(s.n_active),
                num(s.triangle_factor),
                num(s.correlations),
                num(s.ln_dim),
                num(s.entropy),
            ]);
        }
        let (a, s) = c.peak();
        peaks.push(vec![c.n.to_string(), num(a), num(s), num(s / c.n as f64)]);
    }
    Ok((t, peaks))
}

fn row_config(cfg: &ExperimentConfig, n: usize, corrections: bool) -> RowModelConfig {
    RowModelConfig {
        n,
        m: (cfg.models.density_max * n as f64).ceil() as usize,
        samples: cfg.models.row_samples,
        corrections,
        seed: derive_seed(cfg.seed, ROW_STREAM | n as u64, corrections as u64),
    }
}

fn rows(cfg: &ExperimentConfig) -> anyhow::Result<Table> {
    let cells: Vec<(usize, bool)> = cfg.models.row_n.iter().flat_map(|&n| [(n, true), (n, false)]).collect();
    let series = par_map(cfg.workers, &cells, |&(n, c)| Ok(row_model_simulate(&row_config(cfg, n, c))?))?;
    let mut t = Table::new(&[
        "series",
        "n",
        "m",
        "alpha",
        "mean",
        "sd",
        "cond_mean",
        "cond_sd",
        "cond_count",
        "vanished_fraction",
        "closed_form",
    ]);
    for (&(n, corrected), stats) in cells.iter().zip(series) {
        let label = if corrected { "corrected" } else { "uncorrected" };
        for s in stats {
            let mut row = vec![label.to_string(), n.to_string()];
            row.extend(row_fields(n, &s));
            row.push(num(closed_form_mean_ln_omega(n, s.clauses, true)));
            t.push(row);
        }
    }
    Ok(t)
}

fn row_fields(n: usize, s: &RowStats) -> Vec<String> {
    vec![
        s.clauses.to_string(),
        num(s.clauses as f64 / n as f64),
        num(s.mean),
        num(s.sd),
        num(s.cond_mean),
        num(s.cond_sd),
        s.cond_count.to_string(),
        num(s.vanished_fraction),
    ]
}

/// Instances for the overlay: unconditioned, all of length `m_max`.
pub fn overlay_instances(cfg: &ExperimentConfig, n: usize, m_max: usize) -> Vec<CnfInstance> {
    (0..cfg.models.overlay_instances)
        .map(|i| {
            let seed = derive_seed(cfg.seed, OVERLAY_STREAM | n as u64, i as u64);
            random_instance(n, m_max, &mut ChaCha8Rng::seed_from_u64(seed))
        })
        .collect()
}

/// Half-cut entropy after each clause prefix, `0..=m`; a vanished state
/// counts as zero entropy.
pub fn flat_entropies(inst: &CnfInstance) -> anyhow::Result<Vec<f64>> {
    let trace = flat_protocol_dense(inst, inst.n() / 2)?;
    let mut s = vec![0.0];
    s.extend(trace.steps.iter().map(|st| st.spectrum.entropy()));
    Ok(s)
}

fn overlay(cfg: &ExperimentConfig) -> anyhow::Result<Table> {
    let n = cfg.models.overlay_n;
    if n > DEFAULT_DENSE_LIMIT || n % 2 == 1 {
        return Err(UsageError(format!("overlay_n = {n} must be even and at most {DEFAULT_DENSE_LIMIT}")).into());
    }
    let m_max = (cfg.models.density_max * n as f64).ceil() as usize;
    let instances = overlay_instances(cfg, n, m_max);
    let entropies = par_map(cfg.workers, &instances, flat_entropies)?;
    let model = &reservoir_curves(cfg, &[n])?[0];
    let row_model = row_model_simulate(&row_config(cfg, n, true))?;
    let empirical = empirical_row_statistics(&instances)?;
    let mut t = Table::new(&[
        "n",
        "m",
        "alpha",
        "reservoir_entropy",
        "flat_mean",
        "flat_sd",
        "instances",
        "row_model_mean",
        "row_empirical_mean",
        "row_model_cond_mean",
        "row_empirical_cond_mean",
    ]);
    for m in 0..=m_max {
        let column: Vec<f64> = entropies.iter().map(|s| s[m]).collect();
        let (mean, sd) = mean_sd(&column);
        t.push(vec![
            n.to_string(),
            m.to_string(),
            num(m as f64 / n as f64),
            num(model.states[m].entropy),
            num(mean),
            num(sd),
            column.len().to_string(),
            num(row_model[m].mean),
            num(empirical[m].mean),
            num(row_model[m].cond_mean),
            num(empirical[m].cond_mean),
        ]);
    }
    Ok(t)
}

/// Constants, diagonal, reservoir, row-model and overlay tables. The
/// primary table holds the constants.
pub fn run(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let mut report = Report::default();
    let (consts, failures) = constants()?;
    report.failures = failures;
    for r in &consts.rows {
        report.messages.push(format!("{:<14} {:.4}", r[0], r[1].parse::<f64>().unwrap_or(f64::NAN)));
    }
    report.tables.push(("", consts));
    if !cfg.models.diagonal_n.is_empty() {
        report.tables.push(("diagonal", diagonal(cfg)?));
    }
    if !cfg.models.reservoir_n.is_empty() {
        let (curves, peaks) = reservoir(cfg)?;
        report.tables.push(("reservoir", curves));
        report.tables.push(("reservoir_peaks", peaks));
    }
    if !cfg.models.row_n.is_empty() {
        report.tables.push(("rows", rows(cfg)?));
    }
    if cfg.models.overlay_n > 0 && cfg.models.overlay_instances > 0 {
        report.tables.push(("overlay", overlay(cfg)?));
    }
    let names: Vec<&str> = report.tables.iter().map(|(s, _)| *s).collect();
    report.manifest = Some(manifest(Command::Models, cfg, serde_json::json!(names)));
    Ok(report)
}
