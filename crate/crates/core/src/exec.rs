//! Deterministic execution helpers for the data-parallel loops (parameter
//! sweeps and quadrature-node sums).
//!
//! With the `parallel` feature the indexed map runs on rayon; without it the
//! same code path runs sequentially. Reductions always combine partial
//! results in index order over fixed-size chunks, so output bits do not
//! depend on thread count or on the feature flag.

use crate::matrix::CMatrix;

/// Chunk width for ordered partial sums. Fixed so the summation tree, and
/// therefore rounding, is identical across sequential and parallel runs.
pub const CHUNK: usize = 32;

/// Ordered map over `0..n`: parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn map_indexed<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Ordered map over `0..n`: parallel when the `parallel` feature is on.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    map_indexed_seq(n, f)
}

/// Ordered map over `0..n`, always sequential. Kept public so benchmarks can
/// compare the two lanes directly.
pub fn map_indexed_seq<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}

/// Σ_{i<n} term(i) for dim x dim matrices, chunked and order-fixed.
pub fn sum_matrices<F>(n: usize, dim: usize, term: F) -> CMatrix
where
    F: Fn(usize) -> CMatrix + Sync + Send,
{
    let n_chunks = n.div_ceil(CHUNK);
    let partials = map_indexed(n_chunks, |c| {
        let mut acc = CMatrix::zeros(dim, dim);
        let hi = ((c + 1) * CHUNK).min(n);
        for i in c * CHUNK..hi {
            acc += term(i);
        }
        acc
    });
    partials
        .into_iter()
        .fold(CMatrix::zeros(dim, dim), |acc, p| acc + p)
}

/// Same summation tree as [`sum_matrices`] but forced onto one thread.
pub fn sum_matrices_seq<F>(n: usize, dim: usize, term: F) -> CMatrix
where
    F: Fn(usize) -> CMatrix,
{
    let n_chunks = n.div_ceil(CHUNK);
    let partials = map_indexed_seq(n_chunks, |c| {
        let mut acc = CMatrix::zeros(dim, dim);
        let hi = ((c + 1) * CHUNK).min(n);
        for i in c * CHUNK..hi {
            acc += term(i);
        }
        acc
    });
    partials
        .into_iter()
        .fold(CMatrix::zeros(dim, dim), |acc, p| acc + p)
}

/// max_{i<n} f(i); max is order-insensitive but the map stays ordered anyway.
pub fn fold_max<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    map_indexed(n, f).into_iter().fold(f64::NEG_INFINITY, f64::max)
}
