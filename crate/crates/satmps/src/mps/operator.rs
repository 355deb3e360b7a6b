use ndarray::Array3;

use crate::sat::Clause;

/// Diagonal clause gate `1 + (w - 1)·h_j` and its MPO over the clause span.
///
/// `w` is the weight left on the violating assignment: `e^{-dτ}` for an
/// imaginary-time step, 0 for the projector. The MPO carries a two-state flag
/// bond, "every literal seen so far is false", from the first to the last
/// involved site; sites in between only pass the flag along.
#[derive(Clone, Debug, PartialEq)]
pub struct ClauseOperator {
    sites: [usize; 3],
    falsifying: [bool; 3],
    weight: f64,
    mpo: Vec<Array3<f64>>,
}

/// Gate `exp(-dτ h_j)`; `dτ = ∞` gives the projector `1 - h_j`.
pub fn clause_to_mpo(clause: &Clause, dtau: f64) -> ClauseOperator {
    assert!(dtau >= 0.0, "dτ must be non-negative");
    ClauseOperator::with_weight(clause, (-dtau).exp())
}

impl ClauseOperator {
    /// Gate leaving weight `weight` on the violating assignment.
    pub fn with_weight(clause: &Clause, weight: f64) -> Self {
        let vs = clause.violating_sites();
        let sites = vs.map(|(s, _)| s);
        let falsifying = vs.map(|(_, v)| v);
        let coeff = weight - 1.0;
        let (a, b, c) = (sites[0], sites[1], sites[2]);
        let pick = |v: bool, s: usize| (s == v as usize) as u8 as f64;

        let mut mpo = Vec::with_capacity(c - a + 1);
        for k in a..=c {
            let w = if k == a {
                let mut w = Array3::zeros((1, 2, 2));
                for s in 0..2 {
                    w[[0, 0, s]] = 1.0;
                    w[[0, 1, s]] = coeff * pick(falsifying[0], s);
                }
                w
            } else if k == c {
                let mut w = Array3::zeros((2, 1, 2));
                for s in 0..2 {
                    w[[0, 0, s]] = 1.0;
                    w[[1, 0, s]] = pick(falsifying[2], s);
                }
                w
            } else {
                let mut w = Array3::zeros((2, 2, 2));
                for s in 0..2 {
                    w[[0, 0, s]] = 1.0;
                    w[[1, 1, s]] = if k == b { pick(falsifying[1], s) } else { 1.0 };
                }
                w
            };
            mpo.push(w);
        }
        Self { sites, falsifying, weight, mpo }
    }

    /// First-order gate `1 - dτ·h_j`, used only to expose splitting error.
    pub fn linearized(clause: &Clause, dtau: f64) -> Self {
        Self::with_weight(clause, 1.0 - dtau)
    }

    /// Involved sites, 0-based and sorted.
    pub fn sites(&self) -> [usize; 3] { self.sites }

    pub fn span(&self) -> (usize, usize) { (self.sites[0], self.sites[2]) }

    /// Site values that falsify each literal, aligned with [`Self::sites`].
    pub fn falsifying(&self) -> [bool; 3] { self.falsifying }

    pub fn weight(&self) -> f64 { self.weight }

    pub fn is_identity(&self) -> bool { self.weight == 1.0 }

    /// Diagonal over the joint space of the three sites, big-endian in
    /// `(s_a, s_b, s_c)`.
    pub fn diagonal(&self) -> [f64; 8] {
        let mut d = [1.0; 8];
        let v = self.falsifying.map(|b| b as usize);
        d[v[0] << 2 | v[1] << 1 | v[2]] = self.weight;
        d
    }

    /// MPO tensors `(w_left, w_right, s)` for sites `span.0..=span.1`.
    pub fn mpo(&self) -> &[Array3<f64>] { &self.mpo }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Contract the MPO back to its diagonal over the whole span.
    fn mpo_diagonal(op: &ClauseOperator) -> Vec<f64> {
        let len = op.mpo().len();
        (0..1usize << len)
            .map(|x| {
                let mut v = vec![1.0];
                for (k, w) in op.mpo().iter().enumerate() {
                    let s = x >> (len - 1 - k) & 1;
                    let (_, wr, _) = w.dim();
                    v = (0..wr).map(|j| v.iter().enumerate().map(|(i, a)| a * w[[i, j, s]]).sum()).collect();
                }
                v[0]
            })
            .collect()
    }

    #[test]
    fn zero_step_is_identity() {
        let op = clause_to_mpo(&Clause::from_dimacs([1, 2, 3]).unwrap(), 0.0);
        assert!(op.is_identity());
        assert!(mpo_diagonal(&op).iter().all(|&d| d == 1.0));
    }

    #[test]
    fn projector_zeroes_violating_string() {
        let op = clause_to_mpo(&Clause::from_dimacs([1, 2, 3]).unwrap(), f64::INFINITY);
        assert_eq!(op.diagonal(), [0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(mpo_diagonal(&op), op.diagonal().to_vec());
    }

    #[test]
    fn long_range_mpo_matches_diagonal() {
        let clause = Clause::from_dimacs([-6, 1, 4]).unwrap();
        let op = clause_to_mpo(&clause, 0.5);
        assert_eq!(op.sites(), [0, 3, 5]);
        let d = mpo_diagonal(&op);
        for (x, &v) in d.iter().enumerate() {
            // span bits: site0 .. site5, big-endian
            let violated = x >> 5 & 1 == 0 && x >> 2 & 1 == 0 && x & 1 == 1;
            let expect = if violated { (-0.5f64).exp() } else { 1.0 };
            assert!((v - expect).abs() < 1e-15, "x = {x:06b}");
        }
        assert!(op.mpo().iter().all(|w| w.dim().0 <= 2 && w.dim().1 <= 2));
    }
}
