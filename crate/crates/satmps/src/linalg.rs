//! Thin wrappers over faer decompositions for ndarray matrices.

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::svd::{svd as faer_svd, svd_scratch, ComputeSvdVectors, SvdParams};
use faer::{Auto, Mat, Par};
use ndarray::{Array1, Array2, ArrayView2};

fn to_faer(m: ArrayView2<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[[i, j]])
}

/// Bidiagonal QR iteration at every size. faer's divide-and-conquer stage
/// loses accuracy (or returns NaN) on matrices with many zero singular
/// values, which is the normal case for projected states.
fn params() -> SvdParams {
    SvdParams { recursion_threshold: usize::MAX, ..<SvdParams as Auto<f64>>::auto() }
}

fn decompose(m: ArrayView2<f64>, vectors: bool) -> Result<(Mat<f64>, Vec<f64>, Mat<f64>), String> {
    let (r, c) = m.dim();
    let k = r.min(c);
    let a = to_faer(m);
    let mode = if vectors { ComputeSvdVectors::Thin } else { ComputeSvdVectors::No };
    let (mut u, mut v) = if vectors { (Mat::zeros(r, k), Mat::zeros(c, k)) } else { (Mat::zeros(0, 0), Mat::zeros(0, 0)) };
    let mut s = Diag::<f64>::zeros(k);
    let mut buf = MemBuffer::new(svd_scratch::<f64>(r, c, mode, mode, Par::Seq, params().into()));
    faer_svd(
        a.as_ref(),
        s.as_mut(),
        vectors.then(|| u.as_mut()),
        vectors.then(|| v.as_mut()),
        Par::Seq,
        MemStack::new(&mut buf),
        params().into(),
    )
    .map_err(|e| format!("{e:?}"))?;
    let s: Vec<f64> = s.column_vector().iter().copied().collect();
    let finite = s.iter().all(|x| x.is_finite())
        && u.col_iter().chain(v.col_iter()).all(|col| col.iter().all(|x| x.is_finite()));
    if !finite {
        return Err("non-finite SVD factors".to_string());
    }
    Ok((u, s, v))
}

/// Thin SVD `m = u · diag(s) · vt`, singular values descending.
pub(crate) fn svd(m: ArrayView2<f64>) -> Result<(Array2<f64>, Array1<f64>, Array2<f64>), String> {
    let (u, s, v) = decompose(m, true)?;
    let k = s.len();
    Ok((
        Array2::from_shape_fn((m.nrows(), k), |(i, j)| u[(i, j)]),
        Array1::from(s),
        Array2::from_shape_fn((k, m.ncols()), |(i, j)| v[(j, i)]),
    ))
}

/// Thin QR `m = q · r` with `k = min(rows, cols)`.
pub(crate) fn qr(m: ArrayView2<f64>) -> (Array2<f64>, Array2<f64>) {
    let qr = to_faer(m).qr();
    let (q, r) = (qr.compute_thin_Q(), qr.thin_R());
    let k = m.nrows().min(m.ncols());
    (
        Array2::from_shape_fn((m.nrows(), k), |(i, j)| q[(i, j)]),
        Array2::from_shape_fn((k, m.ncols()), |(i, j)| r[(i, j)]),
    )
}

/// Singular values only, descending.
pub(crate) fn singular_values(m: ArrayView2<f64>) -> Result<Vec<f64>, String> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    Ok(decompose(m, false)?.1)
}

/// Entropy `-Σ p ln p` of `p_i = λ_i² / Σλ²`. Zero for an empty spectrum.
pub(crate) fn schmidt_entropy(values: &[f64]) -> f64 {
    let total: f64 = values.iter().map(|v| v * v).sum();
    if total <= 0.0 {
        return 0.0;
    }
    let s: f64 = values
        .iter()
        .map(|v| v * v / total)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum();
    s.max(0.0)
}
