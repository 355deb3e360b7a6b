use statrs::function::gamma::ln_gamma;

/// Entropy of the grouped-violation spectrum at imaginary time `τ`.
///
/// States violating `v` of `m` clauses are lumped together with weight
/// `|X_v| e^{-vτ}`, where `|X_v| / 2^n` is `Binomial(m, 1/8)`. The weights are
/// normalized and `S = -Σ λ_v ln λ_v`. `n` only sets `|X_v|` and drops out.
pub fn grouped_violation_entropy(_n: usize, m: usize, tau: f64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let ln_p = (1.0f64 / 8.0).ln();
    let ln_q = (7.0f64 / 8.0).ln();
    let logs: Vec<f64> = (0..=m)
        .map(|v| {
            let (v, mf) = (v as f64, m as f64);
            ln_gamma(mf + 1.0) - ln_gamma(v + 1.0) - ln_gamma(mf - v + 1.0) + v * ln_p + (mf - v) * ln_q - v * tau
        })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    let ln_z = top + z.ln();
    let s: f64 = logs
        .iter()
        .map(|&l| {
            let lp = l - ln_z;
            let p = lp.exp();
            if p > 0.0 { -p * lp } else { 0.0 }
        })
        .sum();
    s.max(0.0)
}

/// Maximizer of [`grouped_violation_entropy`] over `τ ∈ [10⁻³, 10³]`: a
/// 61-point log grid brackets the best point, then golden-section search in
/// `ln τ` refines it to `10⁻⁶` relative.
pub fn find_tau_hat(n: usize, m: usize) -> f64 {
    let (lo, hi) = (1e-3f64.ln(), 1e3f64.ln());
    let grid: Vec<f64> = (0..=60).map(|j| lo + (hi - lo) * j as f64 / 60.0).collect();
    let s = |x: f64| grouped_violation_entropy(n, m, x.exp());
    let best = (0..grid.len())
        .max_by(|&a, &b| s(grid[a]).total_cmp(&s(grid[b])))
        .expect("non-empty grid");
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(grid.len() - 1)]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    while b - a > 1e-6 {
        if s(c) >= s(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    (0.5 * (a + b)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn binomial_entropy(m: usize, p: f64) -> f64 {
        let mut s = 0.0;
        for v in 0..=m {
            let c: f64 = (0..v).fold(1.0, |acc, j| acc * (m - j) as f64 / (j + 1) as f64);
            let pv = c * p.powi(v as i32) * (1.0 - p).powi((m - v) as i32);
            if pv > 0.0 {
                s -= pv * pv.ln();
            }
        }
        s
    }

    #[test]
    fn limits() {
        assert_abs_diff_eq!(grouped_violation_entropy(10, 30, 0.0), binomial_entropy(30, 0.125), epsilon = 1e-12);
        assert!(grouped_violation_entropy(10, 30, 60.0) < 1e-20);
        assert_eq!(grouped_violation_entropy(10, 0, 1.0), 0.0);
    }

    #[test]
    fn tilting_is_a_binomial_with_smaller_success() {
        let tau: f64 = 0.7;
        let p = 0.125 * (-tau).exp() / (0.875 + 0.125 * (-tau).exp());
        assert_abs_diff_eq!(grouped_violation_entropy(12, 50, tau), binomial_entropy(50, p), epsilon = 1e-12);
    }

    #[test]
    fn tau_hat_is_positive_and_bracketed() {
        let t = find_tau_hat(12, 51);
        assert!(t > 0.0 && (1e-3..=1e3).contains(&t));
    }
}
