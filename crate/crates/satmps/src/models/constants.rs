use std::f64::consts::LN_2;

use super::{ModelError, ModelResult};

fn binomial(n: u32, k: u32) -> f64 { (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64) }

/// Clause density at which the expected per-row `ln Ω` crosses zero, with
/// binomial `p_i = C(k,i)/2^k`, `q_i = 2^{-i}` and `f_i = 1 - 2^{i-k}`.
pub fn critical_alpha_star(k: u32) -> ModelResult<f64> {
    if k < 2 {
        return Err(ModelError::Domain { name: "k", value: k as f64 });
    }
    let sum: f64 = (0..k)
        .map(|i| {
            let p = binomial(k, i) / 2f64.powi(k as i32);
            let q = 0.5f64.powi(i as i32);
            let f = 1.0 - 2f64.powi(i as i32 - k as i32);
            q * p * f.ln()
        })
        .sum();
    Ok(-LN_2 / (2.0 * sum))
}

/// Clause density at which the reservoir filling reaches `f`:
/// `(f - 1) ln 2 = α ln(7/8)`.
pub fn alpha_for_filling(f: f64) -> f64 { (1.0 - f) * LN_2 / (8.0f64 / 7.0).ln() }

/// `α♯`, the density at half filling.
pub fn alpha_sharp() -> f64 { alpha_for_filling(0.5) }

/// `dim L_m = (7/8)^{m/2} 2^{n/2}`.
pub fn reservoir_dimension(n: usize, m: usize) -> f64 {
    (0.5 * (n as f64 * LN_2 + m as f64 * (7.0f64 / 8.0).ln())).exp()
}

/// Two-term Schmidt decomposition of the seven-term three-qubit state with
/// `|000⟩` removed, split one qubit against two.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SchmidtConstants {
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    pub alpha: f64,
}

impl SchmidtConstants {
    /// Residuals of the four coefficient equations.
    pub fn residuals(&self) -> [f64; 4] {
        let (st, ct) = self.theta.sin_cos();
        let (sa, ca) = self.alpha.sin_cos();
        let r3 = 3f64.sqrt();
        [
            self.a * ct * ca + self.b * st * sa - r3,
            self.a * st * ca - self.b * ct * sa - r3,
            self.a * ct * sa - self.b * st * ca,
            self.a * st * sa + self.b * ct * ca - 1.0,
        ]
    }
}

pub fn initial_schmidt_constants() -> SchmidtConstants {
    let root = 37f64.sqrt();
    let a = ((7.0 - root) / 2.0).sqrt();
    let b = ((7.0 + root) / 2.0).sqrt();
    let theta = ((a * a - 3.0) / 3.0).atan();
    let (st, ct) = theta.sin_cos();
    let alpha = st.atan2(3f64.sqrt() * (ct + st));
    SchmidtConstants { a, b, theta, alpha }
}

/// Initial slope `η` of `⟨ln λ²⟩` per clause for a cut after `left` of `n`
/// sites.
pub fn initial_schmidt_slope(n: usize, left: usize) -> ModelResult<f64> {
    if n < 3 {
        return Err(ModelError::TooFewSites { n, min: 3 });
    }
    if left == 0 || left >= n {
        return Err(ModelError::BadCut { cut: left, n });
    }
    let falling = |x: usize| (x as f64) * (x as f64 - 1.0) * (x as f64 - 2.0);
    let p = (falling(left) + falling(n - left)) / falling(n);
    let c = initial_schmidt_constants();
    let split = (c.a * c.a / 8.0).ln() + (c.b * c.b / 8.0).ln();
    Ok((p * (7.0f64 / 8.0).ln() + (1.0 - p) * split) / (p + 2.0 * (1.0 - p)))
}

/// `(1 - p) ln √q`: a subspace stays intact with probability `p` and otherwise
/// keeps the fraction `q` of its weight.
pub fn late_slope(p: f64, q: f64) -> ModelResult<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ModelError::Domain { name: "p", value: p });
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(ModelError::Domain { name: "q", value: q });
    }
    Ok((1.0 - p) * 0.5 * q.ln())
}

/// Expected per-row counts of assignments violating zero and one clauses.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ViolationCounts {
    pub zero: f64,
    pub one: f64,
}

/// `⟨n₀⟩ = 2^{n/2} (7/8)^m`, `⟨n₁⟩ = (m/7) ⟨n₀⟩`.
pub fn violation_counts_estimate(n: usize, m: usize) -> ViolationCounts {
    let zero = (n as f64 * LN_2 / 2.0 + m as f64 * (7.0f64 / 8.0).ln()).exp();
    ViolationCounts { zero, one: m as f64 / 7.0 * zero }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn critical_ratios() {
        assert_abs_diff_eq!(critical_alpha_star(3).unwrap(), 2.555_581_784_499_784, epsilon = 1e-12);
        assert_abs_diff_eq!(critical_alpha_star(4).unwrap(), 4.997_014_879_520_567, epsilon = 1e-12);
        assert!(critical_alpha_star(1).is_err());
        assert_abs_diff_eq!(alpha_sharp(), 2.595_446_534_842_217, epsilon = 1e-12);
        assert_eq!(alpha_for_filling(1.0), 0.0);
        assert_abs_diff_eq!(alpha_for_filling(0.75), alpha_sharp() / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn i2_term() {
        let term = 0.25 * 0.375 * 0.5f64.ln();
        let k3: f64 = -LN_2 / (2.0 * critical_alpha_star(3).unwrap());
        let rest = 0.125 * (7.0f64 / 8.0).ln() + 0.5 * 0.375 * 0.75f64.ln();
        assert_abs_diff_eq!(k3 - rest, term, epsilon = 1e-15);
    }

    #[test]
    fn reservoir_dimension_values() {
        assert_abs_diff_eq!(reservoir_dimension(12, 0), 64.0, epsilon = 1e-12);
        assert_abs_diff_eq!(reservoir_dimension(20, 20), 269.389_389_991_760_25, epsilon = 1e-9);
    }

    #[test]
    fn schmidt_system() {
        let c = initial_schmidt_constants();
        assert_abs_diff_eq!(c.a, 0.6772, epsilon = 5e-5);
        assert_abs_diff_eq!(c.b, 2.5576, epsilon = 5e-5);
        assert_abs_diff_eq!(c.a * c.a + c.b * c.b, 7.0, epsilon = 1e-12);
        let closed = (294f64.sqrt() + 222f64.sqrt()) / 12.0 * (7.0 - 37f64.sqrt()).sqrt();
        assert_abs_diff_eq!(c.b, closed, epsilon = 1e-12);
        for r in c.residuals() {
            assert!(r.abs() < 1e-12);
        }
    }

    #[test]
    fn slopes() {
        let c = initial_schmidt_constants();
        let split = ((c.a * c.a / 8.0).ln() + (c.b * c.b / 8.0).ln()) / 2.0;
        // Cut after one of three sites: no clause fits on one side.
        assert_abs_diff_eq!(initial_schmidt_slope(3, 1).unwrap(), split, epsilon = 1e-14);
        assert!(initial_schmidt_slope(14, 7).unwrap() < 0.0);
        assert!(initial_schmidt_slope(14, 0).is_err());
        assert_eq!(late_slope(1.0, 0.3).unwrap(), 0.0);
        assert_eq!(late_slope(0.4, 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(late_slope(0.5, 0.25).unwrap(), -0.346_573_590_279_972_6, epsilon = 1e-15);
        assert!(late_slope(0.5, 0.0).is_err());
    }

    #[test]
    fn violation_counts() {
        let v = violation_counts_estimate(16, 0);
        assert_abs_diff_eq!(v.zero, 256.0, epsilon = 1e-9);
        assert_eq!(v.one, 0.0);
        let m = (20.0 * alpha_sharp()).round() as usize;
        let v = violation_counts_estimate(20, m);
        assert_abs_diff_eq!(v.one / v.zero, m as f64 / 7.0, epsilon = 1e-12);
    }
}
