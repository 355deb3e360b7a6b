use std::f64::consts::LN_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Hypergeometric};

use super::{mean_sd, ModelError, ModelResult};
use crate::sat::CnfInstance;

/// Parameters of the stochastic row model.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct RowModelConfig {
    /// Even number of variables; rows and columns each carry `n/2`.
    pub n: usize,
    pub m: usize,
    pub samples: usize,
    pub corrections: bool,
    pub seed: u64,
}

/// Row statistics after a given number of clauses.
///
/// `mean`/`sd` describe `ln Ω` over all rows and `cond_mean`/`cond_sd` over
/// rows with `Ω > 0`; `sd` is a sample standard deviation.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RowStats {
    pub clauses: usize,
    pub mean: f64,
    pub sd: f64,
    pub cond_mean: f64,
    pub cond_sd: f64,
    pub cond_count: usize,
    pub vanished_fraction: f64,
}

fn check_even(n: usize) -> ModelResult<()> {
    if n % 2 == 1 {
        return Err(ModelError::OddSites(n));
    }
    if n < 6 {
        return Err(ModelError::TooFewSites { n, min: 6 });
    }
    Ok(())
}

fn row_probabilities(n: usize, hypergeometric: bool) -> [f64; 4] {
    let h = (n / 2) as f64;
    let nf = n as f64;
    let mut p = [0.0; 4];
    for (i, slot) in p.iter_mut().enumerate() {
        *slot = if hypergeometric {
            let choose = |a: f64, k: usize| (0..k).fold(1.0, |acc, j| acc * (a - j as f64) / (j + 1) as f64);
            choose(h, i) * choose(h, 3 - i) / choose(nf, 3)
        } else {
            [1.0, 3.0, 3.0, 1.0][i] / 8.0
        };
    }
    p
}

/// `(n/2) ln 2 + m Σ_{i<3} q_i p_i ln f_i`, with hypergeometric or binomial
/// `p_i`.
pub fn closed_form_mean_ln_omega(n: usize, m: usize, hypergeometric: bool) -> f64 {
    let p = row_probabilities(n, hypergeometric);
    let per_clause: f64 = (0..3)
        .map(|i| 0.5f64.powi(i as i32) * p[i] * (1.0 - 2f64.powi(i as i32 - 3)).ln())
        .sum();
    n as f64 * LN_2 / 2.0 + m as f64 * per_clause
}

/// Samples of the row model, summarized after every clause.
///
/// Each clause places `i ~ Hypergeometric(n/2, n/2, 3)` of its variables in
/// the row space. With probability `q_i = 2^{-i}` the row literals are all
/// false and the row keeps the fraction `f_i = 1 - 2^{i-3}` of its
/// assignments; `i = 3` empties the row. With corrections on, clause `c`
/// first checks for earlier clauses over the same variables, each listed
/// event firing with probability `1 - (1 - n_k/N)^{c-1}`:
///
/// * `i = 2`: skip (`n₁`), else the row vanishes (`n₁` again);
/// * `i = 1`: skip (`n₂`), else two rolls of `n₃` each promote `i`;
/// * `i = 0`: skip (`n₄`), else three rolls of `n₅` promote by one and three
///   of `n₆` by two.
///
/// A promotion to `i ≥ 3` empties the row. Emptied rows are flagged but their
/// `ln Ω` keeps evolving, so the unconditioned mean stays finite.
pub fn row_model_simulate(config: &RowModelConfig) -> ModelResult<Vec<RowStats>> {
    let n = config.n;
    check_even(n)?;
    let (nr, nc) = ((n / 2) as f64, (n / 2) as f64);
    let nf = n as f64;
    let big_n = 2.0 * nf * (2.0 * nf - 2.0) * (2.0 * nf - 4.0);
    let counts = [
        3.0 * nr * (nr - 1.0),
        6.0 * nr,
        3.0 * nr * 2.0 * (nc - 1.0),
        6.0,
        6.0 * 2.0 * (nc - 1.0),
        3.0 * 2.0 * (nc - 1.0) * 2.0 * (nc - 2.0),
    ];
    let hyper = Hypergeometric::new(n as u64, (n / 2) as u64, 3).expect("valid hypergeometric");
    let ln_f = [7.0f64 / 8.0, 0.75, 0.5].map(f64::ln);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut ln_omega = vec![nf * LN_2 / 2.0; config.samples];
    let mut vanished = vec![false; config.samples];
    let mut out = Vec::with_capacity(config.m + 1);
    out.push(summarize(0, &ln_omega, &vanished));
    for c in 1..=config.m {
        let prob = counts.map(|nk| 1.0 - (1.0 - nk / big_n).powi(c as i32 - 1));
        for (lo, gone) in ln_omega.iter_mut().zip(vanished.iter_mut()) {
            let mut i = hyper.sample(&mut rng) as usize;
            if rng.random::<f64>() >= 0.5f64.powi(i as i32) {
                continue;
            }
            if config.corrections {
                let mut roll = |k: usize| rng.random::<f64>() < prob[k];
                match i {
                    2 => {
                        if roll(0) {
                            continue;
                        }
                        if roll(0) {
                            *gone = true;
                            continue;
                        }
                    }
                    1 => {
                        if roll(1) {
                            continue;
                        }
                        i += (0..2).filter(|_| roll(2)).count();
                    }
                    0 => {
                        if roll(3) {
                            continue;
                        }
                        i += (0..3).filter(|_| roll(4)).count();
                        i += 2 * (0..3).filter(|_| roll(5)).count();
                    }
                    _ => {}
                }
            }
            if i >= 3 {
                *gone = true;
            } else {
                *lo += ln_f[i];
            }
        }
        out.push(summarize(c, &ln_omega, &vanished));
    }
    Ok(out)
}

fn summarize(clauses: usize, ln_omega: &[f64], vanished: &[bool]) -> RowStats {
    let (mean, sd, _) = mean_sd(ln_omega.iter().copied());
    let alive = ln_omega.iter().zip(vanished).filter(|(_, &v)| !v).map(|(&x, _)| x);
    let (cond_mean, cond_sd, cond_count) = mean_sd(alive);
    let vanished_fraction = vanished.iter().filter(|&&v| v).count() as f64 / vanished.len().max(1) as f64;
    RowStats { clauses, mean, sd, cond_mean, cond_sd, cond_count, vanished_fraction }
}

/// Row statistics of real instances after every clause prefix.
///
/// Rows are assignments of the first `n/2` variables, columns of the rest,
/// and `Ω` counts the satisfying completions of a row. `cond_*` pool `ln Ω`
/// over nonempty rows of all instances. The unconditioned `mean` is
/// `ln ⟨Ω⟩` over all rows pooled (an empty row has `ln Ω = -∞`), and `sd` is
/// the spread of the per-instance `ln ⟨Ω⟩` over instances with any solution
/// left.
pub fn empirical_row_statistics(instances: &[CnfInstance]) -> ModelResult<Vec<RowStats>> {
    let Some(first) = instances.first() else { return Ok(Vec::new()) };
    let n = first.n();
    check_even(n)?;
    if n > 26 {
        return Err(ModelError::TooManySites { n, limit: 26 });
    }
    let m = instances.iter().map(|i| i.m()).min().unwrap_or(0);
    let h = n / 2;
    let rows = 1usize << h;
    let words = rows.div_ceil(64);
    // omega[c][instance][row]
    let mut omega: Vec<Vec<Vec<u32>>> = vec![Vec::with_capacity(instances.len()); m + 1];
    for inst in instances {
        if inst.n() != n {
            return Err(ModelError::MixedSizes(n, inst.n()));
        }
        let full_last = if rows % 64 == 0 { u64::MAX } else { (1u64 << (rows % 64)) - 1 };
        let mut bits = vec![u64::MAX; rows * words];
        for r in 0..rows {
            bits[r * words + words - 1] = full_last;
        }
        for (c, slot) in omega.iter_mut().enumerate() {
            slot.push(
                (0..rows).map(|r| bits[r * words..(r + 1) * words].iter().map(|w| w.count_ones()).sum()).collect(),
            );
            if c == m {
                break;
            }
            let clause = &inst.clauses()[c];
            let (mut rmask, mut rpat, mut cmask, mut cpat) = (0usize, 0usize, 0usize, 0usize);
            for lit in clause.literals() {
                let v = lit.variable() as usize;
                let neg = lit.is_negated() as usize;
                if v <= h {
                    rmask |= 1 << (h - v);
                    rpat |= neg << (h - v);
                } else {
                    cmask |= 1 << (n - v);
                    cpat |= neg << (n - v);
                }
            }
            let mut kill = vec![0u64; words];
            for col in (0..rows).filter(|x| x & cmask == cpat) {
                kill[col / 64] |= 1 << (col % 64);
            }
            for r in (0..rows).filter(|x| x & rmask == rpat) {
                for (w, k) in bits[r * words..(r + 1) * words].iter_mut().zip(&kill) {
                    *w &= !k;
                }
            }
        }
    }
    Ok(omega
        .iter()
        .enumerate()
        .map(|(c, per_inst)| {
            let pooled = per_inst.iter().flatten();
            let (cond_mean, cond_sd, cond_count) =
                mean_sd(pooled.clone().filter(|&&o| o > 0).map(|&o| (o as f64).ln()));
            let total_rows = (per_inst.len() * rows) as f64;
            let mean_omega = pooled.clone().map(|&o| o as f64).sum::<f64>() / total_rows;
            let (_, sd, _) = mean_sd(
                per_inst
                    .iter()
                    .map(|o| o.iter().map(|&x| x as f64).sum::<f64>() / rows as f64)
                    .filter(|&x| x > 0.0)
                    .map(f64::ln),
            );
            let empty = pooled.filter(|&&o| o == 0).count() as f64;
            RowStats {
                clauses: c,
                mean: mean_omega.ln(),
                sd,
                cond_mean,
                cond_sd,
                cond_count,
                vanished_fraction: empty / total_rows,
            }
        })
        .collect())
}
