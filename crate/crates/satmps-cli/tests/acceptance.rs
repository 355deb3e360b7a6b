//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! `cargo test -p satmps-cli --test acceptance -- 4 7` runs a subset. The
//! process exits 0 even when a criterion fails unless `SATMPS_STRICT=1`.

use std::f64::consts::LN_2;
use std::sync::OnceLock;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use satmps::boolean::{boolean_basis, compare_dimensions, implies, BitMatrix};
use satmps::dense::{build_energy_diagonal, flat_protocol_dense, ite_evolve, schmidt, DenseState};
use satmps::magic::{exact_stabilizer_entropies, exact_stabilizer_entropy, markov_m2, sample_m1, MarkovConfig, RenyiOrder};
use satmps::models::{
    alpha_sharp, critical_alpha_star, diagonal_model_entropy, empirical_row_statistics, find_tau_hat,
    initial_schmidt_constants, model_entropy_curve, random_combinatorial_entropy, row_model_simulate,
    DiagonalModelParams, RowModelConfig, RowStats,
};
use satmps::mps::{flat_run, ite_run, product_plus_state, GateKind, Mps, MpsError, Schedule, TruncationPolicy};
use satmps::sat::{count_dpll, generate_satisfiable, random_instance, unique_solution_filter, CnfInstance};
use satmps_cli::commands::evolve::{bump, dense_trace};
use satmps_cli::commands::models::flat_entropies;
use satmps_cli::{derive_seed, jobs, par_map, run, Command, ExperimentConfig, Report};

const ALPHA_C: f64 = 4.27;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome { Outcome { pass, detail: detail.into() } }

fn rng(stream: u64, i: u64) -> ChaCha8Rng { ChaCha8Rng::seed_from_u64(derive_seed(0, stream, i)) }

fn m_of(n: usize, alpha: f64) -> usize { (alpha * n as f64).round() as usize }

/// `(slope, intercept, R²)` of a least-squares line.
fn fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx, sxy * sxy / (sxx * syy))
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let k = v.len() as f64;
    let mean = v.iter().sum::<f64>() / k;
    (mean, (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt())
}

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |best, i| if v[i] > v[best] { i } else { best })
}

fn c1_constants() -> Outcome {
    let a_star = critical_alpha_star(3).unwrap();
    let a_sharp = alpha_sharp();
    let sc = initial_schmidt_constants();
    let sum = sc.a * sc.a + sc.b * sc.b;
    let pass = (a_star - 2.556).abs() <= 1e-3
        && (a_sharp - 2.595).abs() <= 1e-3
        && (sc.a - 0.6772).abs() <= 5e-4
        && (sc.b - 2.5576).abs() <= 5e-4
        && (sum - 7.0).abs() <= 1e-10;
    outcome(pass, format!("α*={a_star:.4} α♯={a_sharp:.4} A={:.5} B={:.5} A²+B²-7={:.1e}", sc.a, sc.b, sum - 7.0))
}

fn c2_flat_oracle() -> Outcome {
    let cells: Vec<(usize, f64, u64)> = [8, 10, 12]
        .into_iter()
        .flat_map(|n| [1.0, 2.6, ALPHA_C].into_iter().flat_map(move |a| (0..50).map(move |i| (n, a, i))))
        .collect();
    let checks = par_map(0, &cells, |&(n, a, i)| {
        let inst = random_instance(n, m_of(n, a), &mut rng(n as u64, i + 1000 * (a * 100.0) as u64));
        let exact = count_dpll(&inst);
        let dense = flat_protocol_dense(&inst, n / 2)?;
        Ok(match flat_run(&inst, &TruncationPolicy::exact(), n / 2) {
            Ok((mps, _)) => {
                let count = (mps.norm_sq() * (1u64 << n) as f64).round() as u64;
                (count == exact, mps.to_dense()?.max_abs_diff(&dense.state))
            }
            Err(MpsError::NormUnderflow { .. }) => (exact == 0, dense.state.amplitudes().iter().fold(0.0, |m, a| a.abs().max(m))),
            Err(e) => return Err(e.into()),
        })
    })
    .unwrap();
    let counted = checks.iter().filter(|c| c.0).count();
    let worst = checks.iter().map(|c| c.1).fold(0.0, f64::max);
    outcome(
        counted == checks.len() && worst <= 1e-9,
        format!("{counted}/{} counts exact, max |Δψ| = {worst:.1e}", checks.len()),
    )
}

fn c3_ite_oracle() -> Outcome {
    let policy = TruncationPolicy::exact();
    let mut worst: f64 = 0.0;
    for seed in 0..5 {
        let inst = generate_satisfiable(10, m_of(10, ALPHA_C), seed).unwrap();
        let schedule = Schedule { dtau: 0.05, tau_max: 6.0, ..Schedule::default() };
        let trace = ite_run(&inst, &schedule, &policy).unwrap();
        let diag = build_energy_diagonal(&inst).unwrap();
        for r in &trace.records {
            let s = schmidt(&ite_evolve(&diag, r.time).unwrap(), 5).unwrap().entropy();
            worst = worst.max((s - r.cut_entropy).abs());
        }
    }
    // Linearized gates against the closed form, at dτ and dτ/2.
    let inst = generate_satisfiable(10, m_of(10, ALPHA_C), 0).unwrap();
    let diag = build_energy_diagonal(&inst).unwrap();
    let err = |dtau: f64| {
        let schedule = Schedule { dtau, tau_max: 3.0, gate: GateKind::Linearized, ..Schedule::default() };
        let trace = ite_run(&inst, &schedule, &policy).unwrap();
        trace
            .records
            .iter()
            .map(|r| (schmidt(&ite_evolve(&diag, r.time).unwrap(), 5).unwrap().entropy() - r.cut_entropy).abs())
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (err(0.1), err(0.05));
    let ratio = coarse / fine;
    outcome(
        worst <= 1e-3 && (1.6..=2.4).contains(&ratio),
        format!("max |ΔS| = {worst:.1e}; linearized error {coarse:.2e} → {fine:.2e}, ratio {ratio:.2}"),
    )
}

fn c4_bump() -> Outcome {
    let n = 14;
    let m = m_of(n, ALPHA_C);
    let inst = (0..).find_map(|seed| unique_solution_filter(n, m, seed).ok()).unwrap();
    let schedule = Schedule { dtau: 0.25, tau_max: 10.0, ..Schedule::default() };
    let trace = ite_run(&inst, &schedule, &TruncationPolicy::exact()).unwrap();
    let s = trace.cut_entropies();
    let (s0, s_end) = (s[0], *s.last().unwrap());
    let i = argmax(&s);
    let weight = trace.records.last().unwrap().solution_weight.unwrap();
    let pass = s0 < 0.05 && i > 0 && i + 1 < s.len() && s[i] > 1.0 && s_end < 0.05 && weight > 0.99;
    outcome(
        pass,
        format!(
            "S(0)={s0:.3} Ŝ={:.3} at τ̂={:.2} S(τ_max)={s_end:.3} weight={weight:.4}",
            s[i], trace.records[i].time
        ),
    )
}

/// `(n, bumps, instances)` from the dense closed form at `α_c`, 100
/// satisfiable instances per size. Instances whose entropy never turns over
/// have no bump.
fn bump_sample() -> &'static Vec<(usize, Vec<(f64, f64)>, usize)> {
    static CELL: OnceLock<Vec<(usize, Vec<(f64, f64)>, usize)>> = OnceLock::new();
    CELL.get_or_init(|| {
        let cfg = ExperimentConfig {
            n: vec![10, 12, 14],
            alpha: vec![ALPHA_C],
            instances: 100,
            seed: 5,
            tau_max: 8.0,
            ..Default::default()
        };
        let all = jobs(&cfg);
        let bumps = par_map(0, &all, |job| Ok(bump(&dense_trace(&job.instance(&cfg)?, &cfg)?))).unwrap();
        cfg.n
            .iter()
            .map(|&n| {
                let mine: Vec<_> = all.iter().zip(&bumps).filter(|(j, _)| j.n == n).map(|(_, b)| *b).collect();
                (n, mine.iter().flatten().copied().collect(), mine.len())
            })
            .collect()
    })
}

fn c5_linear_peak() -> Outcome {
    let data = bump_sample();
    let ns: Vec<f64> = data.iter().map(|(n, _, _)| *n as f64).collect();
    let means: Vec<f64> = data.iter().map(|(_, p, _)| mean_sd(&p.iter().map(|x| x.1).collect::<Vec<_>>()).0).collect();
    let (a, b, r2) = fit(&ns, &means);
    let below = ns.iter().zip(&means).all(|(n, s)| *s < n * LN_2 / 2.0 - 0.5);
    let shown: Vec<String> =
        data.iter().zip(&means).map(|((n, p, k), s)| format!("{n}:{s:.3} ({}/{k})", p.len())).collect();
    outcome(a > 0.0 && r2 > 0.95 && below, format!("⟨Ŝ⟩ {}; a={a:.4} b={b:.3} R²={r2:.4}", shown.join(" ")))
}

fn c6_tau_universality() -> Outcome {
    let data = bump_sample();
    let tau_mean = |n: usize| {
        let (_, p, _) = data.iter().find(|(k, _, _)| *k == n).unwrap();
        mean_sd(&p.iter().map(|x| x.0).collect::<Vec<_>>()).0
    };
    let (t10, t14) = (tau_mean(10), tau_mean(14));
    let rel = (t10 - t14).abs() / t14;
    let alphas = [3.5, 4.0, 4.5, 5.0, 5.5];
    let model: Vec<f64> = alphas.iter().map(|&a| find_tau_hat(14, m_of(14, a)).ln()).collect();
    let (model_slope, _, model_r2) = fit(&alphas, &model);
    let cfg = ExperimentConfig { n: vec![10], alpha: alphas.to_vec(), instances: 50, seed: 6, tau_max: 8.0, ..Default::default() };
    let all = jobs(&cfg);
    let taus = par_map(0, &all, |job| Ok(bump(&dense_trace(&job.instance(&cfg)?, &cfg)?).map(|b| b.0))).unwrap();
    let measured: Vec<f64> = (0..alphas.len())
        .map(|k| {
            let m = m_of(10, alphas[k]);
            let v: Vec<f64> = all.iter().zip(&taus).filter(|(j, _)| j.m == m).filter_map(|(_, t)| *t).collect();
            mean_sd(&v).0.ln()
        })
        .collect();
    let (measured_slope, _, _) = fit(&alphas, &measured);
    let same_sign = model_slope.signum() == measured_slope.signum() && model_slope != 0.0;
    outcome(
        rel <= 0.10 && model_r2 > 0.9 && same_sign,
        format!(
            "⟨τ̂⟩ n=10 {t10:.3} n=14 {t14:.3} (Δ {:.1}%); model ln τ̂ slope {model_slope:.3} R²={model_r2:.3}; measured slope {measured_slope:.3}",
            100.0 * rel
        ),
    )
}

fn c7_diagonal() -> Outcome {
    let fills = [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
    let cells: Vec<(usize, usize)> = [10, 14, 20].into_iter().flat_map(|n| (0..fills.len()).map(move |k| (n, k))).collect();
    let results = par_map(0, &cells, |&(n, k)| {
        let params = DiagonalModelParams::new(n, fills[k])?;
        let model = diagonal_model_entropy(&params);
        let mut r = rng(7, (n * 100 + k) as u64);
        let samples: Vec<f64> =
            (0..16).map(|_| random_combinatorial_entropy(&params, &mut r)).collect::<Result<_, _>>()?;
        let (mean, sd) = mean_sd(&samples);
        let inside = samples.iter().all(|s| *s >= model.lower - 3.0 * sd && *s <= model.upper + 3.0 * sd);
        let tracks = (model.mean - mean).abs() <= 3.0 * sd;
        Ok((inside && tracks, format!("n={n} f={} model {:.3} sample {mean:.3}±{sd:.3}", fills[k], model.mean)))
    })
    .unwrap();
    let bad: Vec<&str> = results.iter().filter(|r| !r.0).map(|r| r.1.as_str()).collect();
    let detail = if bad.is_empty() {
        format!("{} cells inside bounds and tracked", results.len())
    } else {
        format!("{}/{} cells fail; first: {}", bad.len(), results.len(), bad[0])
    };
    outcome(bad.is_empty(), detail)
}

fn c8_reservoir() -> Outcome {
    let n = 14;
    let m_max = 6 * n;
    let instances: Vec<CnfInstance> = (0..100).map(|i| random_instance(n, m_max, &mut rng(8, i))).collect();
    let curves = par_map(0, &instances, flat_entropies).unwrap();
    let mean: Vec<f64> = (0..=m_max).map(|m| curves.iter().map(|c| c[m]).sum::<f64>() / curves.len() as f64).collect();
    let e = argmax(&mean);
    let (emp_alpha, emp_s) = (e as f64 / n as f64, mean[e]);
    let (model_alpha, model_s) = model_entropy_curve(n, m_max).unwrap().peak();
    let d_alpha = (model_alpha - emp_alpha).abs() / emp_alpha;
    let d_s = (model_s - emp_s).abs() / emp_s;
    let peaks: Vec<(f64, f64)> = (10..=40)
        .step_by(2)
        .map(|k| {
            let (a, s) = model_entropy_curve(k, 6 * k).unwrap().peak();
            (a, s / k as f64)
        })
        .collect();
    let sharp = alpha_sharp();
    let alpha_trend = peaks.windows(2).all(|w| w[1].0 >= w[0].0)
        && (peaks.last().unwrap().0 - sharp).abs() < (peaks[0].0 - sharp).abs();
    let s_trend = peaks.windows(2).all(|w| w[1].1 >= w[0].1) && peaks.iter().all(|p| p.1 < LN_2 / 2.0);
    outcome(
        d_alpha <= 0.15 && d_s <= 0.15 && alpha_trend && s_trend,
        format!(
            "α̂ model {model_alpha:.3} vs {emp_alpha:.3} ({:.0}%), Ŝ model {model_s:.3} vs {emp_s:.3} ({:.0}%); α̂(n) {:.3}→{:.3} trend {alpha_trend}; Ŝ/n {:.4}→{:.4} trend {s_trend}",
            100.0 * d_alpha,
            100.0 * d_s,
            peaks[0].0,
            peaks.last().unwrap().0,
            peaks[0].1,
            peaks.last().unwrap().1
        ),
    )
}

/// Zero crossing of the unconditioned mean by linear interpolation, as `α`.
fn crossing(stats: &[RowStats], n: usize) -> Option<f64> {
    stats.windows(2).find(|w| w[0].mean > 0.0 && w[1].mean <= 0.0).map(|w| {
        let t = w[0].mean / (w[0].mean - w[1].mean);
        (w[0].clauses as f64 + t) / n as f64
    })
}

fn c9_rows() -> Outcome {
    let n = 20;
    let m_max = 5 * n;
    let instances: Vec<CnfInstance> = (0..200).map(|i| random_instance(n, m_max, &mut rng(9, i))).collect();
    let empirical = empirical_row_statistics(&instances).unwrap();
    let model = |corrections| {
        row_model_simulate(&RowModelConfig { n, m: m_max, samples: 2000, corrections, seed: 9 }).unwrap()
    };
    let (on, off) = (model(true), model(false));
    let combined = |a: f64, b: f64| (a.powi(2) + if b.is_finite() { b.powi(2) } else { 0.0 }).sqrt();
    let mut misses = Vec::new();
    for (mo, em) in on.iter().zip(&empirical) {
        if !((mo.mean - em.mean).abs() <= 3.0 * combined(mo.sd, em.sd)) {
            misses.push(format!("mean@m={}", mo.clauses));
        }
        if mo.cond_count > 0 && em.cond_count > 0 && !((mo.cond_mean - em.cond_mean).abs() <= 3.0 * combined(mo.cond_sd, em.cond_sd)) {
            misses.push(format!("cond@m={}", mo.clauses));
        }
    }
    let discrepancy = |series: &[RowStats]| {
        let d: Vec<f64> = series
            .iter()
            .zip(&empirical)
            .filter(|(a, b)| a.cond_count > 0 && b.cond_count > 0)
            .map(|(a, b)| (a.cond_mean - b.cond_mean).abs())
            .collect();
        d.iter().sum::<f64>() / d.len() as f64
    };
    let (d_on, d_off) = (discrepancy(&on), discrepancy(&off));
    let big = |corrections| {
        row_model_simulate(&RowModelConfig { n: 40, m: 160, samples: 4000, corrections, seed: 19 }).unwrap()
    };
    let a_star = critical_alpha_star(3).unwrap();
    let cross = crossing(&big(false), 40);
    let cross_on = crossing(&big(true), 40);
    let cross_ok = cross.is_some_and(|c| (c - a_star).abs() <= 0.15);
    outcome(
        misses.is_empty() && cross_ok && d_on < d_off,
        format!(
            "{} of {} points outside 3σ{}; crossing α={} (corrected {}); cond discrepancy on {d_on:.3} off {d_off:.3}",
            misses.len(),
            2 * on.len(),
            misses.first().map_or(String::new(), |m| format!(" (first {m})")),
            cross.map_or("none".into(), |c| format!("{c:.3}")),
            cross_on.map_or("none".into(), |c| format!("{c:.3}")),
        ),
    )
}

fn c10_magic() -> Outcome {
    let inst = generate_satisfiable(6, m_of(6, ALPHA_C), 10).unwrap();
    let diag = build_energy_diagonal(&inst).unwrap();
    let mut agree = 0;
    let mut total = 0;
    let mut worst_z: f64 = 0.0;
    for (k, tau) in [0.25, 0.5, 1.0, 2.0, 4.0].into_iter().enumerate() {
        let state = ite_evolve(&diag, tau).unwrap();
        let (m1, m2) = exact_stabilizer_entropies(&state).unwrap();
        let mps = Mps::from_dense(&state).unwrap();
        let e1 = sample_m1(&mps, 20_000, 100 + k as u64).unwrap();
        let e2 = markov_m2(&mps, &MarkovConfig { steps: 200_000, ..Default::default() }, 200 + k as u64).unwrap();
        for (e, x) in [(e1, m1), (e2, m2)] {
            total += 1;
            agree += e.agrees_with(x, 3.0) as usize;
            worst_z = worst_z.max((e.value - x).abs() / e.std_error.max(1e-300));
        }
    }
    let plus = product_plus_state(6);
    let basis = DenseState::basis(6, 0b101101);
    let zeros = [
        exact_stabilizer_entropies(&plus.to_dense().unwrap()).unwrap(),
        exact_stabilizer_entropies(&basis).unwrap(),
    ];
    let sampled_zero = [sample_m1(&plus, 500, 1).unwrap().value, sample_m1(&Mps::from_dense(&basis).unwrap(), 500, 2).unwrap().value];
    let trivial = zeros.iter().all(|(a, b)| a.abs() < 1e-12 && b.abs() < 1e-12) && sampled_zero.iter().all(|v| v.abs() < 1e-12);

    let n = 12;
    let big = (0..).find_map(|seed| unique_solution_filter(n, m_of(n, ALPHA_C), seed).ok()).unwrap();
    let diag = build_energy_diagonal(&big).unwrap();
    let taus: Vec<f64> = (0..=60).map(|k| k as f64 * 0.1).collect();
    let sweep = par_map(0, &taus, |&t| {
        let state = ite_evolve(&diag, t)?;
        Ok((exact_stabilizer_entropy(&state, RenyiOrder::One)?, schmidt(&state, n / 2)?.entropy()))
    })
    .unwrap();
    let m1: Vec<f64> = sweep.iter().map(|x| x.0).collect();
    let s: Vec<f64> = sweep.iter().map(|x| x.1).collect();
    let maxima: Vec<usize> = (1..m1.len() - 1).filter(|&i| m1[i] > m1[i - 1] && m1[i] >= m1[i + 1]).collect();
    let (tau_m, tau_s) = (taus[argmax(&m1)], taus[argmax(&s)]);
    let colocated = maxima.len() == 1 && (tau_m - tau_s).abs() <= 0.5;
    outcome(
        agree == total && trivial && colocated,
        format!(
            "{agree}/{total} within 3σ (worst {worst_z:.2}σ); zero cases {trivial}; n=12 M₁ maxima {}, τ(M₁)={tau_m:.1} τ(S)={tau_s:.1}",
            maxima.len()
        ),
    )
}

fn c11_boolean() -> Outcome {
    let (n, left, m_max) = (12, 6, 72);
    let instances: Vec<CnfInstance> = (0..10).map(|i| random_instance(n, m_max, &mut rng(11, i))).collect();
    let curves = par_map(0, &instances, |inst| Ok(compare_dimensions(inst, left)?)).unwrap();
    let avg = |f: fn(&satmps::boolean::DimensionPoint) -> usize| -> Vec<f64> {
        (0..=m_max).map(|m| curves.iter().map(|c| f(&c[m]) as f64).sum::<f64>() / curves.len() as f64).collect()
    };
    let (bd, rk) = (avg(|p| p.boolean_dim), avg(|p| p.svd_rank));
    let rise_fall = |v: &[f64]| {
        let i = argmax(v);
        v[i] > v[0] && v[i] > v[v.len() - 1]
    };
    let (pb, pr) = (argmax(&bd), argmax(&rk));
    let spans = instances.iter().all(|inst| {
        (0..=m_max).all(|m| {
            let matrix = BitMatrix::from_instance(&inst.prefix(m), left).unwrap();
            let basis = boolean_basis(&matrix);
            (0..matrix.rows()).all(|r| {
                let row = matrix.row(r);
                let mut acc = vec![0u64; row.len()];
                for b in basis.iter().filter(|b| implies(b, row)) {
                    acc.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
                }
                acc == row
            })
        })
    });
    outcome(
        rise_fall(&bd) && rise_fall(&rk) && pb.abs_diff(pr) <= 2 && spans,
        format!("peaks: Boolean m={pb} ({:.1}), SVD m={pr} ({:.1}); span holds {spans}", bd[pb], rk[pr]),
    )
}

fn c12_determinism() -> Outcome {
    let base = ExperimentConfig {
        n: vec![6, 8],
        alpha: vec![2.0, ALPHA_C],
        instances: 3,
        seed: 12,
        tau_max: 2.0,
        snapshots: true,
        magic: satmps_cli::config::MagicConfig { taus: vec![0.5, 1.5], samples: 200, markov_steps: 2000, ..Default::default() },
        models: satmps_cli::config::ModelsConfig {
            diagonal_n: vec![8],
            diagonal_samples: 3,
            reservoir_n: vec![10],
            row_n: vec![10],
            row_samples: 200,
            overlay_n: 8,
            overlay_instances: 3,
            ..Default::default()
        },
        ..Default::default()
    };
    let fingerprint = |r: &Report| {
        let mut s: Vec<String> = r.tables.iter().map(|(k, t)| format!("{k}\n{}", t.to_csv_string())).collect();
        s.extend(r.files.iter().map(|(k, b)| format!("{k}:{b:?}")));
        s.push(r.manifest.as_ref().map(|m| m.to_string()).unwrap_or_default());
        s
    };
    let mut same = Vec::new();
    for cmd in [Command::Generate, Command::Evolve, Command::Flat, Command::Magic, Command::Models] {
        let a = run(cmd, &ExperimentConfig { workers: 1, ..base.clone() }).unwrap();
        let b = run(cmd, &ExperimentConfig { workers: 4, ..base.clone() }).unwrap();
        same.push((cmd.name(), fingerprint(&a) == fingerprint(&b)));
    }
    let bad: Vec<&str> = same.iter().filter(|x| !x.1).map(|x| x.0).collect();
    outcome(bad.is_empty(), format!("{} commands byte-identical across reruns; differing: {bad:?}", same.len() - bad.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("closed-form constants", c1_constants),
        ("flat protocol vs oracle", c2_flat_oracle),
        ("ITE vs oracle", c3_ite_oracle),
        ("entanglement bump", c4_bump),
        ("linear peak scaling", c5_linear_peak),
        ("τ̂ universality", c6_tau_universality),
        ("diagonal model", c7_diagonal),
        ("reservoir model", c8_reservoir),
        ("row model", c9_rows),
        ("stabilizer entropies", c10_magic),
        ("Boolean compression", c11_boolean),
        ("determinism", c12_determinism),
    ];
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let k = i + 1;
        if !wanted.is_empty() && !wanted.contains(&k) {
            continue;
        }
        let start = Instant::now();
        let o = check();
        failed += !o.pass as usize;
        println!(
            "criterion {k:>2} {} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 && std::env::var("SATMPS_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
