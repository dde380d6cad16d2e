//! Flat storage for a set of points in `R^d`.

use crate::error::{Error, Result};

/// A set of `d`-dimensional points stored as one contiguous `Vec<f64>`.
///
/// Coordinates of point `i` occupy `coords[i*d .. (i+1)*d]`. All geometry
/// operations take a `PointSet` by reference; the struct is cheap to index
/// and cache-friendly for the spatial algorithms.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize) -> Self {
        Self { dim, coords: Vec::new() }
    }

    pub fn with_capacity(dim: usize, n: usize) -> Self {
        Self { dim, coords: Vec::with_capacity(dim * n) }
    }

    /// Wraps an existing flat coordinate buffer. `coords.len()` must be a
    /// multiple of `dim`.
    pub fn from_coords(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidArgument(format!(
                "coordinate buffer of length {} is not a multiple of dim {}",
                coords.len(),
                dim
            )));
        }
        Ok(Self { dim, coords })
    }

    pub fn push(&mut self, point: &[f64]) {
        debug_assert_eq!(point.len(), self.dim);
        self.coords.extend_from_slice(point);
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    /// Errors with the index of the first non-finite point, if any.
    pub fn check_finite(&self) -> Result<()> {
        for (i, p) in self.iter().enumerate() {
            if !p.iter().all(|c| c.is_finite()) {
                return Err(Error::NonFinite { index: i });
            }
        }
        Ok(())
    }
}

/// Squared Euclidean distance between two coordinate slices.
#[inline]
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc
}

/// Euclidean norm of a coordinate slice.
#[inline]
pub fn norm(a: &[f64]) -> f64 {
    a.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Pairwise (cascade) summation. Fixed accumulation order, error O(log n)
/// ulps instead of O(n) for the naive left fold.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_coords_rejects_ragged_buffer() {
        assert!(PointSet::from_coords(3, vec![1.0, 2.0]).is_err());
        assert!(PointSet::from_coords(0, vec![]).is_err());
    }

    #[test]
    fn indexing_round_trips() {
        let mut ps = PointSet::new(2);
        ps.push(&[1.0, 2.0]);
        ps.push(&[3.0, 4.0]);
        assert_eq!(ps.len(), 2);
        assert_eq!(ps.point(1), &[3.0, 4.0]);
        assert_eq!(ps.iter().count(), 2);
    }

    #[test]
    fn check_finite_reports_offending_index() {
        let ps = PointSet::from_coords(2, vec![0.0, 0.0, f64::NAN, 1.0]).unwrap();
        match ps.check_finite() {
            Err(Error::NonFinite { index }) => assert_eq!(index, 1),
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_inputs() {
        let xs: Vec<f64> = (1..=100).map(|i| 1.0 / i as f64).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
    }
}
