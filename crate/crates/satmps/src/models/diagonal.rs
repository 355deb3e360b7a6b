use std::f64::consts::LN_2;

use ndarray::Array2;
use rand::seq::index::sample;
use rand::Rng;
use statrs::function::gamma::ln_gamma;

use super::{ModelError, ModelResult};
use crate::dense::{schmidt_values, DenseError};
use crate::linalg::schmidt_entropy;

/// Sites and filling fraction `f = log₂ F / n` of a random combinatorial
/// state.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct DiagonalModelParams {
    pub n: usize,
    pub f: f64,
}

impl DiagonalModelParams {
    pub fn new(n: usize, f: f64) -> ModelResult<Self> {
        if !(0.0..=1.0).contains(&f) {
            return Err(ModelError::Filling(f));
        }
        Ok(Self { n, f })
    }

    /// `λ = 2^{(f - 1/2) n}`.
    pub fn lambda(&self) -> f64 { ((self.f - 0.5) * self.n as f64 * LN_2).exp() }

    /// `ln F = f n ln 2`.
    pub fn ln_f(&self) -> f64 { self.f * self.n as f64 * LN_2 }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct DiagonalEntropy {
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
}

/// `E[ln(X + 1)]` for `X ~ Poisson(λ)`.
///
/// Summed outward from the mode until terms drop below `1e-16` of the
/// partial sum; above `λ = 10⁴` a normal approximation is integrated instead.
pub fn poisson_expected_log1p(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    if lambda > 1e4 {
        let sd = lambda.sqrt();
        let steps = 4000;
        let h = 20.0 / steps as f64;
        let (mut acc, mut norm) = (0.0, 0.0);
        for j in 0..=steps {
            let z = -10.0 + j as f64 * h;
            let w = (-0.5 * z * z).exp() * if j == 0 || j == steps { 0.5 } else { 1.0 };
            acc += w * (1.0 + (lambda + z * sd).max(0.0)).ln();
            norm += w;
        }
        return acc / norm;
    }
    let ln_l = lambda.ln();
    let term = |k: f64| (k * ln_l - lambda - ln_gamma(k + 1.0)).exp() * (k + 1.0).ln();
    let mode = lambda.floor();
    let mut sum = term(mode);
    let mut k = mode + 1.0;
    loop {
        let t = term(k);
        sum += t;
        if t < 1e-16 * sum || (k > lambda + 50.0 * lambda.sqrt() + 50.0) {
            break;
        }
        k += 1.0;
    }
    let mut k = mode - 1.0;
    while k >= 0.0 {
        let t = term(k);
        sum += t;
        if t < 1e-16 * sum {
            break;
        }
        k -= 1.0;
    }
    sum
}

/// Poisson diagonal-model entropy with its Jensen lower bound
/// `ln F - ln(1 + λ)` and the dimension bound `min(ln F, (n/2) ln 2)`, all in
/// nats. The mean is kept inside the bounds (and at or above zero).
pub fn diagonal_model_entropy(params: &DiagonalModelParams) -> DiagonalEntropy {
    let ln_f = params.ln_f();
    let lambda = params.lambda();
    let upper = ln_f.min(params.n as f64 * LN_2 / 2.0);
    let lower = (ln_f - lambda.ln_1p()).max(0.0);
    let raw = ln_f - poisson_expected_log1p(lambda);
    DiagonalEntropy { mean: raw.clamp(lower, upper.max(lower)), lower, upper }
}

/// Half-cut entanglement entropy of a random state with `F = round(2^{fn})`
/// unit amplitudes at distinct uniformly chosen basis states.
pub fn random_combinatorial_entropy<R: Rng + ?Sized>(
    params: &DiagonalModelParams,
    rng: &mut R,
) -> Result<f64, DenseError> {
    let n = params.n;
    let dim = 1usize << n;
    let filled = ((params.f * n as f64 * LN_2).exp().round() as usize).clamp(1, dim);
    let cut = n / 2;
    let cols = 1usize << (n - cut);
    let mut m = Array2::zeros((dim / cols, cols));
    for x in sample(rng, dim, filled) {
        m[[x / cols, x % cols]] = 1.0;
    }
    Ok(schmidt_entropy(&schmidt_values(m.view())?))
}
