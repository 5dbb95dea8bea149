//! The B x C embedding batch, the unit every injector operates on.

use crate::error::{Error, Result};

/// A dense row-major B x C matrix of finite feature values.
///
/// Invariants, enforced at construction: B >= 1, C >= 1, every entry finite.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingBatch {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl EmbeddingBatch {
    /// Build from a flat row-major buffer.
    pub fn from_flat(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidShape { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::DataLength {
                expected: rows * cols,
                got: data.len(),
            });
        }
        for (i, v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    row: i / cols,
                    col: i % cols,
                });
            }
        }
        Ok(EmbeddingBatch { data, rows, cols })
    }

    /// Build from per-row vectors; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidShape { rows: 0, cols: 0 });
        }
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    left: cols,
                    right: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Same shape as `other`?
    pub fn same_shape(&self, other: &EmbeddingBatch) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub(crate) fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Error unless every entry lies in [lo, hi].
    pub fn ensure_within(&self, lo: f64, hi: f64) -> Result<()> {
        for (i, &v) in self.data.iter().enumerate() {
            if v < lo || v > hi {
                return Err(Error::UnclampedInput {
                    row: i / self.cols,
                    col: i % self.cols,
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// Concatenate batches along the row axis; all must share a column count.
    pub fn concat_rows(parts: &[EmbeddingBatch]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Empty("batch list"));
        }
        let cols = parts[0].cols;
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            if p.cols != cols {
                return Err(Error::ShapeMismatch {
                    left: (parts[0].rows, cols),
                    right: (p.rows, p.cols),
                });
            }
            data.extend_from_slice(&p.data);
            rows += p.rows;
        }
        Self::from_flat(rows, cols, data)
    }

    /// A view-copy of rows [start, start+len).
    pub fn slice_rows(&self, start: usize, len: usize) -> Result<Self> {
        if start + len > self.rows {
            return Err(Error::OutOfRange {
                name: "row range end",
                value: (start + len) as f64,
                min: 0.0,
                max: self.rows as f64,
            });
        }
        Self::from_flat(
            len,
            self.cols,
            self.data[start * self.cols..(start + len) * self.cols].to_vec(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_dims() {
        assert!(matches!(
            EmbeddingBatch::from_flat(0, 3, vec![]),
            Err(Error::InvalidShape { .. })
        ));
        assert!(matches!(
            EmbeddingBatch::from_flat(2, 0, vec![]),
            Err(Error::InvalidShape { .. })
        ));
        assert!(matches!(
            EmbeddingBatch::from_rows(vec![]),
            Err(Error::InvalidShape { .. })
        ));
    }

    #[test]
    fn rejects_non_finite_with_location() {
        let err = EmbeddingBatch::from_flat(2, 2, vec![0.0, 1.0, f64::NAN, 2.0]).unwrap_err();
        match err {
            Error::NonFinite { row, col } => {
                assert_eq!((row, col), (1, 0));
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn rejects_ragged_rows() {
        let err = EmbeddingBatch::from_rows(vec![vec![1.0, 2.0], vec![3.0]]).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
    }

    #[test]
    fn row_access_and_concat() {
        let b = EmbeddingBatch::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(b.row(1), &[3.0, 4.0]);
        let c = EmbeddingBatch::concat_rows(&[b.clone(), b.clone()]).unwrap();
        assert_eq!(c.rows(), 4);
        assert_eq!(c.row(3), &[3.0, 4.0]);
        let s = c.slice_rows(1, 2).unwrap();
        assert_eq!(s.row(0), &[3.0, 4.0]);
        assert_eq!(s.row(1), &[1.0, 2.0]);
    }

    #[test]
    fn ensure_within_reports_first_offender() {
        let b = EmbeddingBatch::from_rows(vec![vec![0.5, -2.0], vec![0.0, 0.0]]).unwrap();
        match b.ensure_within(-1.0, 1.0).unwrap_err() {
            Error::UnclampedInput { row, col, value } => {
                assert_eq!((row, col), (0, 1));
                assert_eq!(value, -2.0);
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }
}
