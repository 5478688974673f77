//! Norm, singular-value, and eigenvalue routines for finite sections.
//!
//! Dense LAPACK factorizations are used up to [`DENSE_LIMIT`]; larger square
//! sections fall back to power iteration on `AᴴA`, with a dense retry if the
//! iteration fails to settle.

use ndarray::{s, Array1, Array2};
use ndarray_linalg::{EigVals, SVD};

use super::OperatorMatrix;
use crate::error::{Error, Result};
use crate::C64;

/// Largest dimension handled by a dense singular value decomposition.
pub const DENSE_LIMIT: usize = 512;

/// Relative settle tolerance for the power iteration.
pub const POWER_TOL: f64 = 1e-10;

/// Iteration cap before the power method gives up and the dense path runs.
pub const POWER_MAX_ITERS: usize = 10_000;

fn svd_values(m: &Array2<C64>) -> Result<Array1<f64>> {
    let (_, s, _) = m
        .svd(false, false)
        .map_err(|e| Error::Numerics(format!("singular value decomposition failed: {e}")))?;
    Ok(s)
}

fn dense_norm(m: &Array2<C64>) -> Result<f64> {
    Ok(svd_values(m)?.iter().copied().fold(0.0, f64::max))
}

fn power_norm(m: &Array2<C64>) -> Option<f64> {
    let n = m.ncols();
    let mh = m.t().mapv(|z| z.conj());
    // One large product up front halves the per-step cost: iterating with
    // `AᴴA` visits exactly the same unit vectors as alternating `A`/`Aᴴ`
    // applications, and `‖A v‖² = vᴴ(AᴴA)v` recovers the same estimate. The
    // iterate is kept as an n×1 matrix so the products run through the
    // matrix-matrix kernel, which has a fast complex backend while the
    // matrix-vector one does not.
    let b = mh.dot(m);
    let mut v = Array2::from_elem((n, 1), C64::new(1.0 / (n as f64).sqrt(), 0.0));
    let mut prev = f64::NAN;
    for _ in 0..POWER_MAX_ITERS {
        let w = b.dot(&v);
        let sigma2 = v.iter().zip(w.iter()).map(|(a, c)| (a.conj() * c).re).sum::<f64>();
        let sigma = sigma2.max(0.0).sqrt();
        let wn = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if wn == 0.0 {
            return Some(sigma);
        }
        v = w.mapv(|z| z / wn);
        if (sigma - prev).abs() <= POWER_TOL * sigma.max(1.0) {
            return Some(sigma);
        }
        prev = sigma;
    }
    None
}

/// Largest singular value of a section.
///
/// Square sections up to [`DENSE_LIMIT`] use a dense decomposition; larger
/// ones use deterministic power iteration on `AᴴA` (all-ones start), falling
/// back to the dense path if the iteration does not settle.
pub fn op_norm(a: &OperatorMatrix) -> Result<f64> {
    op_norm_entries(&a.entries)
}

/// [`op_norm`] on a raw entry matrix.
pub fn op_norm_entries(m: &Array2<C64>) -> Result<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::InvalidParameter("norm of an empty section".into()));
    }
    if m.nrows().max(m.ncols()) <= DENSE_LIMIT {
        return dense_norm(m);
    }
    match power_norm(m) {
        Some(s) => Ok(s),
        None => dense_norm(m),
    }
}

/// Smallest singular value of the first `cols` columns of a section.
///
/// Keeping `cols` well below the row count measures how the operator acts on
/// low-degree polynomials while retaining the rows that carry their images —
/// a decaying value as the section grows witnesses a non-closed range, while
/// a floor bounded away from zero witnesses boundedness below.
pub fn smallest_sv(a: &OperatorMatrix, cols: usize) -> Result<f64> {
    if cols == 0 || cols > a.entries.ncols() {
        return Err(Error::InvalidParameter(format!(
            "column count {cols} out of range for a section with {} columns",
            a.entries.ncols()
        )));
    }
    let block = a.entries.slice(s![.., ..cols]).to_owned();
    let s = svd_values(&block)?;
    Ok(s.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Eigenvalues of a square section, sorted by decreasing modulus and, within
/// equal modulus, by increasing argument. Deterministic for repeated calls.
pub fn eigenvalues(a: &OperatorMatrix) -> Result<Vec<C64>> {
    if a.entries.nrows() != a.entries.ncols() {
        return Err(Error::InvalidParameter("eigenvalues need a square section".into()));
    }
    let vals = a
        .entries
        .eigvals()
        .map_err(|e| Error::Numerics(format!("eigenvalue computation failed: {e}")))?;
    let mut out: Vec<C64> = vals.to_vec();
    out.sort_by(|x, y| {
        y.norm()
            .total_cmp(&x.norm())
            .then(x.arg().total_cmp(&y.arg()))
    });
    Ok(out)
}
