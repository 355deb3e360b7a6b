//! Boolean-algebra bases of the bipartitioned solution matrix.
//!
//! The real Gram-Schmidt step is replaced by a Boolean one: a product `a · b`
//! becomes the elementwise implication `a ⇒ b` and a sum becomes OR. A row is
//! reduced by removing every basis vector it contains; whatever is left joins
//! the basis. The result spans every row by OR, but its size depends on the
//! row order, which is fixed to index order here.

use ndarray::Array2;
use thiserror::Error;

use crate::linalg;
use crate::sat::CnfInstance;

/// Relative singular-value cutoff for the floating-point rank.
pub const SVD_RANK_CUTOFF: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BooleanError {
    #[error("cut {cut} outside 1..{n}")]
    BadCut { cut: usize, n: usize },

    #[error("{n} variables exceeds the limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("SVD failed: {0}")]
    Linalg(String),
}

/// Packed Boolean matrix, rows of `u64` words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Self { rows, cols, words, bits: vec![0; rows * words] }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Satisfying-assignment matrix of `instance`, split after `left`
    /// variables: entry `(l, r)` is set iff the joint assignment violates no
    /// clause.
    pub fn from_instance(instance: &CnfInstance, left: usize) -> Result<Self, BooleanError> {
        let n = instance.n();
        if left == 0 || left >= n {
            return Err(BooleanError::BadCut { cut: left, n });
        }
        if n > 26 {
            return Err(BooleanError::TooLarge { n, limit: 26 });
        }
        let cols = 1usize << (n - left);
        Ok(Self::from_fn(1 << left, cols, |r, c| instance.violations_at((r * cols + c) as u64) == 0))
    }

    pub fn rows(&self) -> usize { self.rows }

    pub fn cols(&self) -> usize { self.cols }

    pub fn get(&self, r: usize, c: usize) -> bool { self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1 }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.bits[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row(&self, r: usize) -> &[u64] { &self.bits[r * self.words..(r + 1) * self.words] }

    pub fn to_real(&self) -> Array2<f64> {
        Array2::from_shape_fn((self.rows, self.cols), |(r, c)| self.get(r, c) as u8 as f64)
    }
}

fn is_zero(v: &[u64]) -> bool { v.iter().all(|&w| w == 0) }

/// `a ⇒ b` elementwise, i.e. every set bit of `a` is set in `b`.
pub fn implies(a: &[u64], b: &[u64]) -> bool { a.iter().zip(b).all(|(x, y)| x & !y == 0) }

/// Greedy Boolean basis of the rows, in row-index order.
pub fn boolean_basis(matrix: &BitMatrix) -> Vec<Vec<u64>> {
    let mut basis: Vec<Vec<u64>> = Vec::new();
    for r in 0..matrix.rows() {
        let row = matrix.row(r);
        if is_zero(row) {
            continue;
        }
        let mut residual = row.to_vec();
        for b in basis.iter().filter(|b| implies(b, row)) {
            for (x, y) in residual.iter_mut().zip(b) {
                *x &= !y;
            }
        }
        if !is_zero(&residual) {
            basis.push(residual);
        }
    }
    basis
}

/// Number of singular values above `SVD_RANK_CUTOFF` times the largest.
pub fn svd_rank(matrix: &BitMatrix) -> Result<usize, BooleanError> {
    let s = linalg::singular_values(matrix.to_real().view()).map_err(BooleanError::Linalg)?;
    let top = s.first().copied().unwrap_or(0.0);
    Ok(s.iter().filter(|&&v| top > 0.0 && v > SVD_RANK_CUTOFF * top).count())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct DimensionPoint {
    pub m: usize,
    pub boolean_dim: usize,
    pub svd_rank: usize,
}

/// Boolean basis size and SVD rank of every clause prefix, `m = 0..=M`.
pub fn compare_dimensions(instance: &CnfInstance, left: usize) -> Result<Vec<DimensionPoint>, BooleanError> {
    (0..=instance.m())
        .map(|m| {
            let matrix = BitMatrix::from_instance(&instance.prefix(m), left)?;
            Ok(DimensionPoint { m, boolean_dim: boolean_basis(&matrix).len(), svd_rank: svd_rank(&matrix)? })
        })
        .collect()
}
