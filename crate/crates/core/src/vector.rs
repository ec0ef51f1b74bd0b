//! Sparse and dense feature vectors.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Row-like access used by the linear learners; lets sparse TF-IDF vectors
/// and dense decision vectors share one training path.
pub trait FeatureRow {
    fn dim(&self) -> usize;

    fn dot(&self, weights: &[f64]) -> f64;

    /// `weights += scale * self`
    fn add_scaled_to(&self, scale: f64, weights: &mut [f64]);

    fn squared_norm(&self) -> f64;
}

/// Strictly increasing `(index, weight)` pairs over a fixed dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    indices: Vec<u32>,
    values: Vec<f64>,
    dim: usize,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        Self { indices: Vec::new(), values: Vec::new(), dim }
    }

    /// Builds a vector from pairs; pairs must be strictly increasing by index.
    pub fn from_pairs(dim: usize, pairs: Vec<(u32, f64)>) -> Result<Self> {
        let mut indices = Vec::with_capacity(pairs.len());
        let mut values = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            if (i as usize) >= dim {
                return Err(Error::DimensionMismatch { expected: dim, got: i as usize + 1 });
            }
            if let Some(&last) = indices.last() {
                if i <= last {
                    return Err(Error::InvalidParameter("sparse indices must be strictly increasing".into()));
                }
            }
            if !v.is_finite() {
                return Err(Error::InvalidParameter("non-finite sparse weight".into()));
            }
            indices.push(i);
            values.push(v);
        }
        Ok(Self { indices, values, dim })
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().zip(&self.values).map(|(&i, &v)| (i as usize, v))
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.squared_norm())
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (i, v) in self.iter() {
            out[i] = v;
        }
        out
    }

    pub(crate) fn scale(&mut self, factor: f64) {
        for v in &mut self.values {
            *v *= factor;
        }
    }
}

impl<T: FeatureRow + ?Sized> FeatureRow for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn dot(&self, weights: &[f64]) -> f64 {
        (**self).dot(weights)
    }

    fn add_scaled_to(&self, scale: f64, weights: &mut [f64]) {
        (**self).add_scaled_to(scale, weights)
    }

    fn squared_norm(&self) -> f64 {
        (**self).squared_norm()
    }
}

impl FeatureRow for SparseVector {
    fn dim(&self) -> usize {
        self.dim
    }

    fn dot(&self, weights: &[f64]) -> f64 {
        self.iter().map(|(i, v)| weights[i] * v).sum()
    }

    fn add_scaled_to(&self, scale: f64, weights: &mut [f64]) {
        for (i, v) in self.iter() {
            weights[i] += scale * v;
        }
    }

    fn squared_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

impl FeatureRow for [f64] {
    fn dim(&self) -> usize {
        self.len()
    }

    fn dot(&self, weights: &[f64]) -> f64 {
        self.iter().zip(weights).map(|(a, b)| a * b).sum()
    }

    fn add_scaled_to(&self, scale: f64, weights: &mut [f64]) {
        for (w, v) in weights.iter_mut().zip(self) {
            *w += scale * v;
        }
    }

    fn squared_norm(&self) -> f64 {
        self.iter().map(|v| v * v).sum()
    }
}

impl FeatureRow for Vec<f64> {
    fn dim(&self) -> usize {
        self.as_slice().dim()
    }

    fn dot(&self, weights: &[f64]) -> f64 {
        self.as_slice().dot(weights)
    }

    fn add_scaled_to(&self, scale: f64, weights: &mut [f64]) {
        self.as_slice().add_scaled_to(scale, weights)
    }

    fn squared_norm(&self) -> f64 {
        self.as_slice().squared_norm()
    }
}

/// Output of a first-stage text model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FeatureVec {
    Sparse(SparseVector),
    Dense(Vec<f64>),
}

impl FeatureVec {
    pub fn to_dense(&self) -> Vec<f64> {
        match self {
            FeatureVec::Sparse(s) => s.to_dense(),
            FeatureVec::Dense(d) => d.clone(),
        }
    }
}

impl FeatureRow for FeatureVec {
    fn dim(&self) -> usize {
        match self {
            FeatureVec::Sparse(s) => s.dim(),
            FeatureVec::Dense(d) => d.len(),
        }
    }

    fn dot(&self, weights: &[f64]) -> f64 {
        match self {
            FeatureVec::Sparse(s) => s.dot(weights),
            FeatureVec::Dense(d) => d.dot(weights),
        }
    }

    fn add_scaled_to(&self, scale: f64, weights: &mut [f64]) {
        match self {
            FeatureVec::Sparse(s) => s.add_scaled_to(scale, weights),
            FeatureVec::Dense(d) => d.add_scaled_to(scale, weights),
        }
    }

    fn squared_norm(&self) -> f64 {
        match self {
            FeatureVec::Sparse(s) => s.squared_norm(),
            FeatureVec::Dense(d) => d.squared_norm(),
        }
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn select_rows(&self, indices: &[usize]) -> DenseMatrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        DenseMatrix { rows: indices.len(), cols: self.cols, data }
    }

    /// Column-wise concatenation of matrices sharing a row count.
    pub fn hconcat(blocks: &[DenseMatrix]) -> Result<DenseMatrix> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = DenseMatrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            if b.rows != rows {
                return Err(Error::LengthMismatch { left: rows, right: b.rows });
            }
            for r in 0..rows {
                out.row_mut(r)[offset..offset + b.cols].copy_from_slice(b.row(r));
            }
            offset += b.cols;
        }
        Ok(out)
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_rejects_unsorted_and_out_of_range() {
        assert!(SparseVector::from_pairs(3, vec![(1, 1.0), (0, 2.0)]).is_err());
        assert!(SparseVector::from_pairs(3, vec![(1, 1.0), (1, 2.0)]).is_err());
        assert!(SparseVector::from_pairs(3, vec![(3, 1.0)]).is_err());
        assert!(SparseVector::from_pairs(3, vec![(0, f64::NAN)]).is_err());
    }

    #[test]
    fn sparse_dot_matches_dense() {
        let s = SparseVector::from_pairs(5, vec![(0, 1.0), (2, 3.0), (4, 2.0)]).unwrap();
        let w = [2.0, 9.0, 1.0, 9.0, 4.0];
        assert_eq!(s.dot(&w), s.to_dense().dot(&w));
        assert_eq!(s.dot(&w), 13.0);
    }

    #[test]
    fn hconcat_places_blocks_side_by_side() {
        let a = DenseMatrix::from_rows(&[vec![1.0], vec![2.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap();
        let m = DenseMatrix::hconcat(&[a, b]).unwrap();
        assert_eq!(m.row(1), &[2.0, 5.0, 6.0]);
    }
}
