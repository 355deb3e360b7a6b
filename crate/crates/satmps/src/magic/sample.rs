use ndarray::{Array2, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MagicError, MagicEstimate, MagicResult, Pauli, PauliString, RenyiOrder};
use crate::mps::Mps;

/// `Σ_{s's} σ[s'][s] · left(A^{s'}) · mid · right(A^{s})`, the one-site
/// transfer with a real Pauli inserted.
fn pauli_transfer(
    sigma: Pauli,
    a: impl Fn(usize) -> Array2<f64>,
    combine: impl Fn(&Array2<f64>, &Array2<f64>) -> Array2<f64>,
) -> Array2<f64> {
    let m = sigma.real_matrix();
    let mats = [a(0), a(1)];
    let mut out: Option<Array2<f64>> = None;
    for (sp, row) in m.iter().enumerate() {
        for (s, &w) in row.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let term = combine(&mats[sp], &mats[s]) * w;
            out = Some(match out {
                Some(acc) => acc + term,
                None => term,
            });
        }
    }
    out.expect("every Pauli has a nonzero entry")
}

fn slice(t: &ndarray::Array3<f64>, s: usize) -> Array2<f64> { t.index_axis(Axis(1), s).to_owned() }

fn frob_sq(m: ArrayView2<f64>) -> f64 { m.iter().map(|x| x * x).sum() }

/// Draw `count` strings from `Π(P) = ⟨P⟩² / 2^n` by perfect sampling.
///
/// The state is brought into left-canonical form and sampled from the last
/// site to the first. For a suffix `Q` the matrix
/// `W_Q = Σ A^{s'} … σ … A^{s}ᵀ` on the open left bond gives the suffix
/// marginal `‖W_Q‖² / 2^{|Q|}`, so each conditional costs four small matrix
/// products. Returns the strings with their `⟨P⟩²`.
pub fn sample_pauli_strings(mps: &Mps, count: usize, seed: u64) -> MagicResult<Vec<(PauliString, f64)>> {
    let mut canon = mps.clone();
    canon.move_center(canon.n() - 1)?;
    let n = canon.n();
    let tensors = canon.tensors();
    let total: f64 = tensors[n - 1].iter().map(|x| x * x).sum();
    if !(total > 0.0) {
        return Err(MagicError::ZeroNorm);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut symbols = vec![Pauli::I; n];
        let mut w = Array2::from_elem((1, 1), 1.0 / total);
        // `W_true = exp(log_scale) · w`; w is kept at unit norm.
        let mut log_scale = 0.0;
        for k in (0..n).rev() {
            let t = &tensors[k];
            let options: Vec<Array2<f64>> = Pauli::ALL
                .iter()
                .map(|&p| pauli_transfer(p, |s| slice(t, s), |ap, a| ap.dot(&w).dot(&a.t())))
                .collect();
            let weights: Vec<f64> = options.iter().map(|o| frob_sq(o.view())).collect();
            let mut u = rng.random::<f64>() * weights.iter().sum::<f64>();
            let mut pick = 3;
            for (i, &wt) in weights.iter().enumerate() {
                if u < wt {
                    pick = i;
                    break;
                }
                u -= wt;
            }
            while weights[pick] == 0.0 {
                pick -= 1;
            }
            symbols[k] = Pauli::ALL[pick];
            let norm = weights[pick].sqrt();
            w = &options[pick] / norm;
            log_scale += norm.ln();
        }
        let sq = (2.0 * log_scale).exp() * w[[0, 0]] * w[[0, 0]];
        out.push((PauliString::new(symbols), sq));
    }
    Ok(out)
}

/// `⟨ψ|P|ψ⟩ / ⟨ψ|ψ⟩` by a full left-to-right transfer contraction. Strings with
/// an odd number of Y give zero for a real state.
pub fn mps_pauli_expectation(mps: &Mps, pauli: &PauliString) -> f64 {
    let envs = Envs::new(mps);
    let v = envs.full(pauli.symbols());
    if pauli.y_count() % 2 == 1 {
        return 0.0;
    }
    let v = v / envs.norm;
    if pauli.y_count() % 4 == 2 { -v } else { v }
}

/// Sampled `M₁` as the mean of `-ln ⟨P⟩²` over perfect samples, with its
/// standard error.
pub fn sample_m1(mps: &Mps, num_samples: usize, seed: u64) -> MagicResult<MagicEstimate> {
    if num_samples < 2 {
        return Err(MagicError::TooFewSamples { needed: 2, got: num_samples });
    }
    let draws = sample_pauli_strings(mps, num_samples, seed)?;
    let vals: Vec<f64> = draws.iter().map(|(_, v)| -v.ln()).collect();
    let (mean, sd) = mean_sd(&vals);
    Ok(MagicEstimate {
        order: RenyiOrder::One,
        value: mean,
        std_error: sd / (num_samples as f64).sqrt(),
        samples: num_samples,
    })
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.max(0.0).sqrt())
}

/// Chain length, burn-in and batch count for [`markov_m2`].
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MarkovConfig {
    pub steps: usize,
    /// `None` means `10 · n`.
    pub burn_in: Option<usize>,
    pub batches: usize,
}

impl Default for MarkovConfig {
    fn default() -> Self { Self { steps: 20_000, burn_in: None, batches: 20 } }
}

/// Left and right transfer environments of `⟨ψ|P|ψ⟩` for a current string,
/// recomputed lazily after single-site updates.
struct Envs<'a> {
    mps: &'a Mps,
    norm: f64,
}

impl<'a> Envs<'a> {
    fn new(mps: &'a Mps) -> Self {
        let mut e = Self { mps, norm: 1.0 };
        e.norm = e.full(&vec![Pauli::I; mps.n()]);
        e
    }

    fn grow_left(&self, env: &Array2<f64>, k: usize, p: Pauli) -> Array2<f64> {
        let t = &self.mps.tensors()[k];
        pauli_transfer(p, |s| slice(t, s), |ap, a| ap.t().dot(env).dot(a))
    }

    fn grow_right(&self, env: &Array2<f64>, k: usize, p: Pauli) -> Array2<f64> {
        let t = &self.mps.tensors()[k];
        pauli_transfer(p, |s| slice(t, s), |ap, a| ap.dot(env).dot(&a.t()))
    }

    /// Real-Pauli contraction with `Ỹ = -iY`, unnormalized and unsigned.
    fn full(&self, symbols: &[Pauli]) -> f64 {
        let mut env = Array2::from_elem((1, 1), 1.0);
        for (k, &p) in symbols.iter().enumerate() {
            env = self.grow_left(&env, k, p);
        }
        env[[0, 0]]
    }
}

/// Metropolis estimate of `M₂ = -ln E_Π[⟨P⟩²]`.
///
/// The chain starts at the identity string. Each step proposes, with equal
/// odds, either a fresh uniform symbol at one uniform site or fresh uniform
/// symbols at a uniform pair of sites conditioned on keeping the number of Y
/// even. Single-site moves alone cannot reach strings containing Y, since for
/// a real state every odd-Y string has weight zero. Both moves are symmetric,
/// so the acceptance probability is `min(1, ⟨P'⟩² / ⟨P⟩²)`. The error bar
/// comes from batch means, carried through the logarithm to first order.
pub fn markov_m2(mps: &Mps, config: &MarkovConfig, seed: u64) -> MagicResult<MagicEstimate> {
    let n = mps.n();
    let batches = config.batches.max(2);
    if config.steps < batches {
        return Err(MagicError::TooFewSamples { needed: batches, got: config.steps });
    }
    let envs = Envs::new(mps);
    if !(envs.norm > 0.0) {
        return Err(MagicError::ZeroNorm);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symbols = vec![Pauli::I; n];
    // left[k] covers sites 0..k, right[k] covers sites k..n.
    let mut left: Vec<Array2<f64>> = vec![Array2::from_elem((1, 1), 1.0); n + 1];
    let mut right: Vec<Array2<f64>> = vec![Array2::from_elem((1, 1), 1.0); n + 1];
    for k in 0..n {
        left[k + 1] = envs.grow_left(&left[k], k, symbols[k]);
    }
    for k in (0..n).rev() {
        right[k] = envs.grow_right(&right[k + 1], k, symbols[k]);
    }
    let (mut left_ok, mut right_ok) = (n, 0);
    let mut current = 1.0;
    let burn_in = config.burn_in.unwrap_or(10 * n);
    let mut values = Vec::with_capacity(config.steps);
    for step in 0..burn_in + config.steps {
        let moves = propose(&mut rng, &symbols);
        if let (Some(&(first, _)), Some(&(last, _))) = (moves.first(), moves.last()) {
            while left_ok < first {
                left[left_ok + 1] = envs.grow_left(&left[left_ok], left_ok, symbols[left_ok]);
                left_ok += 1;
            }
            while right_ok > last + 1 {
                right[right_ok - 1] = envs.grow_right(&right[right_ok], right_ok - 1, symbols[right_ok - 1]);
                right_ok -= 1;
            }
            let mut env = left[first].clone();
            for k in first..=last {
                let p = moves.iter().find(|m| m.0 == k).map_or(symbols[k], |m| m.1);
                env = envs.grow_left(&env, k, p);
            }
            let v = (&env * &right[last + 1]).sum() / envs.norm;
            let candidate = v * v;
            if candidate >= current || rng.random::<f64>() * current < candidate {
                for &(k, p) in &moves {
                    symbols[k] = p;
                }
                current = candidate;
                left_ok = left_ok.min(first);
                right_ok = right_ok.max(last + 1);
            }
        }
        if step >= burn_in {
            values.push(current);
        }
    }
    let size = values.len() / batches;
    let means: Vec<f64> = values.chunks(size).take(batches).map(|c| c.iter().sum::<f64>() / c.len() as f64).collect();
    let xi = values.iter().sum::<f64>() / values.len() as f64;
    let (_, sd) = mean_sd(&means);
    let se_xi = sd / (batches as f64).sqrt();
    Ok(MagicEstimate { order: RenyiOrder::Two, value: -xi.ln(), std_error: se_xi / xi, samples: config.steps })
}

/// Sorted `(site, new symbol)` changes; empty when the draw changes nothing
/// or breaks Y parity.
fn propose(rng: &mut ChaCha8Rng, symbols: &[Pauli]) -> Vec<(usize, Pauli)> {
    let n = symbols.len();
    let mut moves = if n < 2 || rng.random::<bool>() {
        vec![(rng.random_range(0..n), Pauli::ALL[rng.random_range(0..4)])]
    } else {
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        let (a, b) = (Pauli::ALL[rng.random_range(0..4)], Pauli::ALL[rng.random_range(0..4)]);
        let was = (symbols[i] == Pauli::Y) as u8 + (symbols[j] == Pauli::Y) as u8;
        let now = (a == Pauli::Y) as u8 + (b == Pauli::Y) as u8;
        if (was + now) % 2 == 1 {
            return Vec::new();
        }
        vec![(i.min(j), if i < j { a } else { b }), (i.max(j), if i < j { b } else { a })]
    };
    moves.retain(|&(k, p)| symbols[k] != p);
    moves
}
