//! Similarity measures, normalization, clamping, and seeded Gaussian batches.
//!
//! Everything here is pure except `gaussian_sample`, which advances the
//! caller's generator. Scalars are f64 throughout, even where file formats
//! store f32.

use crate::batch::EmbeddingBatch;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Cosine similarity <a, b> / (|a| |b|).
///
/// Zero-norm inputs are an error rather than a silent 0; a zero vector has
/// no direction and almost always indicates a generator bug upstream.
pub fn cosine_sim(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::Empty("similarity input"));
    }
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroNorm { row: 0 });
    }
    Ok(dot / (na.sqrt() * nb.sqrt()))
}

/// Row-wise cosine similarity of two equally shaped batches.
pub fn batch_cosine_sim(a: &EmbeddingBatch, b: &EmbeddingBatch) -> Result<Vec<f64>> {
    if !a.same_shape(b) {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    a.iter_rows()
        .zip(b.iter_rows())
        .enumerate()
        .map(|(i, (ra, rb))| {
            cosine_sim(ra, rb).map_err(|e| match e {
                Error::ZeroNorm { .. } => Error::ZeroNorm { row: i },
                other => other,
            })
        })
        .collect()
}

/// Scale `v` to unit L2 norm.
pub fn l2_normalize(v: &[f64]) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::Empty("vector"));
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroNorm { row: 0 });
    }
    Ok(v.iter().map(|x| x / norm).collect())
}

/// A rows x cols batch of i.i.d. standard normal samples, deterministic per
/// generator state.
pub fn gaussian_sample(rng: &mut SeededRng, rows: usize, cols: usize) -> Result<EmbeddingBatch> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidShape { rows, cols });
    }
    let mut data = vec![0.0; rows * cols];
    rng.fill_normal(&mut data);
    EmbeddingBatch::from_flat(rows, cols, data)
}

/// Clamp every entry into [lo, hi].
pub fn clamp_components(x: &EmbeddingBatch, lo: f64, hi: f64) -> Result<EmbeddingBatch> {
    if !(lo < hi) {
        return Err(Error::InvalidInterval { lo, hi });
    }
    let data = x.as_slice().iter().map(|v| v.clamp(lo, hi)).collect();
    EmbeddingBatch::from_flat(x.rows(), x.cols(), data)
}

/// Arithmetic mean; 0.0 for an empty slice never occurs in practice because
/// batches have at least one row.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}
