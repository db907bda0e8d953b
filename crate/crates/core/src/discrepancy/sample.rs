use serde::Serialize;

use crate::reduce::pairwise_sum;
use crate::{check_dim, Error, Result};

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Ordered points in ℝᵈ stored row-major, with optional probability weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSet {
    points: Vec<f64>,
    dim: usize,
    weights: Option<Vec<f64>>,
}

impl SampleSet {
    /// `points` holds `n·dim` finite coordinates, row after row.
    pub fn new(points: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter { name: "dim", reason: "must be positive".into() });
        }
        if points.is_empty() {
            return Err(Error::EmptyInput("sample set"));
        }
        if !points.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: points.len() % dim });
        }
        if let Some(pos) = points.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("row {} column {}", pos / dim, pos % dim)));
        }
        Ok(Self { points, dim, weights: None })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().ok_or(Error::EmptyInput("sample set"))?.len();
        let mut points = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            check_dim(dim, r.len())?;
            points.extend_from_slice(r);
        }
        Self::new(points, dim)
    }

    /// Attaches nonnegative weights summing to 1.
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        check_dim(self.n(), weights.len())?;
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter { name: "weights", reason: "must be finite and nonnegative".into() });
        }
        let total = pairwise_sum(&weights);
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidParameter { name: "weights", reason: format!("sum to {total}, not 1") });
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    /// Row-major coordinates.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dim)
    }

    pub fn weight(&self, i: usize) -> f64 {
        match &self.weights {
            Some(w) => w[i],
            None => 1.0 / self.n() as f64,
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        match &self.weights {
            Some(w) => w.clone(),
            None => vec![1.0 / self.n() as f64; self.n()],
        }
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.is_none()
    }

    /// Weighted mean of each coordinate.
    pub fn mean(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|j| pairwise_sum(&(0..self.n()).map(|i| self.weight(i) * self.point(i)[j]).collect::<Vec<_>>()))
            .collect()
    }

    /// Weighted (biased) variance of each coordinate.
    pub fn variance(&self) -> Vec<f64> {
        let mean = self.mean();
        (0..self.dim)
            .map(|j| {
                let terms: Vec<f64> = (0..self.n()).map(|i| self.weight(i) * (self.point(i)[j] - mean[j]).powi(2)).collect();
                pairwise_sum(&terms)
            })
            .collect()
    }

    /// Same weights at new locations.
    pub(crate) fn with_points(&self, points: Vec<f64>) -> Result<Self> {
        check_dim(self.points.len(), points.len())?;
        Ok(Self { weights: self.weights.clone(), ..Self::new(points, self.dim)? })
    }

    /// Same weights, every point shifted by `shift`.
    pub fn translated(&self, shift: &[f64]) -> Result<Self> {
        check_dim(self.dim, shift.len())?;
        let points = self.points.iter().enumerate().map(|(k, v)| v + shift[k % self.dim]).collect();
        Ok(Self { points, dim: self.dim, weights: self.weights.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_input() {
        assert!(SampleSet::new(vec![], 1).is_err());
        assert!(SampleSet::new(vec![1.0, 2.0, 3.0], 2).is_err());
        let e = SampleSet::new(vec![0.0, 1.0, f64::NAN, 2.0], 2).unwrap_err();
        assert_eq!(e, Error::NonFinite("row 1 column 0".into()));
        let s = SampleSet::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        assert!(s.clone().with_weights(vec![0.5, 0.6]).is_err());
        assert!(s.clone().with_weights(vec![1.5, -0.5]).is_err());
        assert_eq!(s.with_weights(vec![0.25, 0.75]).unwrap().mean(), vec![0.75]);
    }

    #[test]
    fn moments() {
        let s = SampleSet::from_rows(&[vec![0.0, 1.0], vec![2.0, 1.0]]).unwrap();
        assert_eq!(s.mean(), vec![1.0, 1.0]);
        assert_eq!(s.variance(), vec![1.0, 0.0]);
        assert_eq!(s.translated(&[1.0, -1.0]).unwrap().point(1), &[3.0, 0.0]);
    }
}
