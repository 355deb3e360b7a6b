use super::{MagicError, MagicResult, Pauli, PauliString, RenyiOrder};
use crate::dense::DenseState;

/// Largest `n` for exact enumeration. The transform costs `n · 4^n`.
pub const EXACT_MAGIC_LIMIT: usize = 12;

/// The string with flip mask `flip` and sign mask `sign` (big-endian).
pub fn pauli_from_masks(n: usize, flip: u64, sign: u64) -> PauliString {
    let symbols = (0..n)
        .map(|k| {
            let bit = n - 1 - k;
            match (flip >> bit & 1, sign >> bit & 1) {
                (0, 0) => Pauli::I,
                (1, 0) => Pauli::X,
                (1, _) => Pauli::Y,
                _ => Pauli::Z,
            }
        })
        .collect();
    PauliString::new(symbols)
}

fn walsh_hadamard(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (a, b) = block.split_at_mut(h);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (p, q) = (*x, *y);
                *x = p + q;
                *y = p - q;
            }
        }
        h *= 2;
    }
}

/// Visit `⟨P⟩²` for every string of the normalized state, grouped by flip
/// mask, as `visit(flip, sign, value)`.
fn for_each_squared(state: &DenseState, mut visit: impl FnMut(u64, u64, f64)) -> MagicResult<()> {
    let n = state.n();
    if n > EXACT_MAGIC_LIMIT {
        return Err(MagicError::TooManySites { n, limit: EXACT_MAGIC_LIMIT });
    }
    let norm_sq = state.norm_sq();
    if !(norm_sq > 0.0) {
        return Err(MagicError::ZeroNorm);
    }
    let psi = state.amplitudes();
    let mut g = vec![0.0; psi.len()];
    for flip in 0..psi.len() {
        for (x, gx) in g.iter_mut().enumerate() {
            *gx = psi[x ^ flip] * psi[x] / norm_sq;
        }
        walsh_hadamard(&mut g);
        for (sign, &h) in g.iter().enumerate() {
            visit(flip as u64, sign as u64, h * h);
        }
    }
    Ok(())
}

/// `Π(P) = ⟨P⟩² / 2^n` indexed by `PauliString::from_index` order.
pub fn pauli_distribution(state: &DenseState) -> MagicResult<Vec<f64>> {
    let n = state.n();
    let dim = 1u64 << n;
    let mut out = vec![0.0; 1 << (2 * n)];
    for_each_squared(state, |flip, sign, v| {
        let mut idx = 0u64;
        for k in (0..n).rev() {
            let p = match (flip >> k & 1, sign >> k & 1) {
                (0, 0) => 0,
                (1, 0) => 1,
                (1, _) => 2,
                _ => 3,
            };
            idx = idx << 2 | p;
        }
        out[idx as usize] = v / dim as f64;
    })?;
    Ok(out)
}

/// `(M₁, M₂)` by enumerating all `4^n` strings.
pub fn exact_stabilizer_entropies(state: &DenseState) -> MagicResult<(f64, f64)> {
    let n = state.n();
    let dim = (1u64 << n) as f64;
    let (mut shannon, mut xi2) = (0.0, 0.0);
    for_each_squared(state, |_, _, v| {
        let p = v / dim;
        if p > 0.0 {
            shannon -= p * p.ln();
        }
        xi2 += p * v;
    })?;
    let ln_dim = n as f64 * std::f64::consts::LN_2;
    Ok((shannon - ln_dim, -xi2.ln()))
}

pub fn exact_stabilizer_entropy(state: &DenseState, order: RenyiOrder) -> MagicResult<f64> {
    let (m1, m2) = exact_stabilizer_entropies(state)?;
    Ok(match order {
        RenyiOrder::One => m1,
        RenyiOrder::Two => m2,
    })
}
