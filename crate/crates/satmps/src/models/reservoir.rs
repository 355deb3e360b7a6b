use std::f64::consts::LN_2;

use statrs::function::gamma::ln_gamma;

use super::{ModelError, ModelResult};

/// Expected number of literal vertices of each degree in the clause graph on
/// `2n` literals. Edges join literals that share a clause; a literal cannot
/// meet its own negation, so the largest degree is `E = 2n - 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeDistribution {
    counts: Vec<f64>,
}

impl DegreeDistribution {
    /// All `2n` vertices isolated.
    pub fn empty(n: usize) -> ModelResult<Self> {
        if n < 2 {
            return Err(ModelError::TooFewSites { n, min: 2 });
        }
        let mut counts = vec![0.0; 2 * n - 1];
        counts[0] = 2.0 * n as f64;
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[f64] { &self.counts }

    pub fn max_degree(&self) -> usize { self.counts.len() - 1 }

    pub fn total(&self) -> f64 { self.counts.iter().sum() }

    /// `Σ d N_d`, twice the number of edges.
    pub fn active(&self) -> f64 { self.counts.iter().enumerate().map(|(d, c)| d as f64 * c).sum() }
}

/// One clause of the mean-field degree chain.
///
/// A vertex is hit with probability `p_s = 3/(2n)`. A hit vertex of degree
/// `d`, with `d̃ = E - d` free partners, gains two new edges with weight
/// `d̃(d̃-1)`, one with `2 d̃ d` and none with `d(d-1)`. A vertex whose weights
/// all vanish keeps its mass.
pub fn markov_degree_step(dist: &DegreeDistribution, n: usize) -> DegreeDistribution {
    let e = dist.max_degree();
    let ps = 3.0 / (2.0 * n as f64);
    let mut next = vec![0.0; e + 1];
    for (d, &count) in dist.counts.iter().enumerate() {
        if count == 0.0 {
            continue;
        }
        let free = (e - d) as f64;
        let df = d as f64;
        let w = [(df * (df - 1.0)).max(0.0), (2.0 * free * df).max(0.0), (free * (free - 1.0)).max(0.0)];
        let total: f64 = w.iter().sum();
        if total == 0.0 {
            next[d] += count;
            continue;
        }
        next[d] += (1.0 - ps) * count;
        for (gain, wi) in w.iter().enumerate() {
            if *wi > 0.0 {
                next[d + gain] += ps * wi / total * count;
            }
        }
    }
    DegreeDistribution { counts: next }
}

/// Probability that `draws` clause triangles drawn uniformly from the
/// `N = t_tot/2` available ones are all distinct, with `A = n_active/6`
/// triangles present: `exp(lnΓ(N+1) - lnΓ(N-A+1) - draws · ln N)`.
pub fn triangle_correction(n: usize, n_active: f64, draws: f64) -> ModelResult<f64> {
    if n < 3 {
        return Err(ModelError::TooFewSites { n, min: 3 });
    }
    let nf = n as f64;
    let big_n = 8.0 * nf * (nf - 1.0) * (nf - 2.0) / 6.0 / 2.0;
    let a = n_active / 6.0;
    if a > big_n {
        return Err(ModelError::TooManyTriangles { triangles: a, max: big_n });
    }
    Ok((ln_gamma(big_n + 1.0) - ln_gamma(big_n - a + 1.0) - draws * big_n.ln()).exp())
}

/// One point of the reservoir entropy curve.
#[derive(Clone, Debug, PartialEq)]
pub struct ReservoirState {
    pub m: usize,
    pub n_active: f64,
    pub triangle_factor: f64,
    /// Entangling correlation fraction `C_m`.
    pub correlations: f64,
    /// `ln dim L_m = (n ln 2 + m ln(7/8)) / 2`.
    pub ln_dim: f64,
    /// `S_m = C_m ln dim L_m`, floored at zero.
    pub entropy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReservoirCurve {
    pub n: usize,
    pub states: Vec<ReservoirState>,
}

impl ReservoirCurve {
    /// `(α̂, Ŝ)`: clause density and value of the largest `S_m`.
    pub fn peak(&self) -> (f64, f64) {
        let best = self
            .states
            .iter()
            .max_by(|a, b| a.entropy.total_cmp(&b.entropy))
            .expect("curve includes m = 0");
        (best.m as f64 / self.n as f64, best.entropy)
    }
}

/// Reservoir entropy `S_m = C_m ln dim L_m` for `m = 0..=m_max` with
/// `C = ½ (n_active/n_tot)(n_cut/n_tot) f`, `n_tot = 2n(n-1)` edges and
/// `n_cut = n²` of them crossing the half cut.
pub fn model_entropy_curve(n: usize, m_max: usize) -> ModelResult<ReservoirCurve> {
    if n % 2 == 1 {
        return Err(ModelError::OddSites(n));
    }
    if n < 4 {
        return Err(ModelError::TooFewSites { n, min: 4 });
    }
    let nf = n as f64;
    let n_tot = 2.0 * nf * (nf - 1.0);
    let n_cut = nf * nf;
    let mut dist = DegreeDistribution::empty(n)?;
    let mut states = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        if m > 0 {
            dist = markov_degree_step(&dist, n);
        }
        let n_active = dist.active();
        let triangle_factor = triangle_correction(n, n_active, n_active / 6.0)?;
        let correlations = 0.5 * (n_active / n_tot) * (n_cut / n_tot) * triangle_factor;
        let ln_dim = 0.5 * (nf * LN_2 + m as f64 * (7.0f64 / 8.0).ln());
        states.push(ReservoirState {
            m,
            n_active,
            triangle_factor,
            correlations,
            ln_dim,
            entropy: (correlations * ln_dim).max(0.0),
        });
    }
    Ok(ReservoirCurve { n, states })
}
