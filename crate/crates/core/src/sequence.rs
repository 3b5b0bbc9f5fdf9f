use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// A d×T matrix of feature vectors over time.
///
/// Column `t` is the feature vector at time step `t`; row `i` is the
/// evolution of feature `i` over time.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSequence {
    values: Matrix,
}

impl FeatureSequence {
    pub fn new(values: Matrix) -> Result<Self> {
        if values.rows() == 0 || values.cols() == 0 {
            return Err(Error::shape(format!(
                "feature sequence needs d >= 1 and T >= 1, got {}x{}",
                values.rows(),
                values.cols()
            )));
        }
        if values.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::value("feature sequence has non-finite entries"));
        }
        Ok(FeatureSequence { values })
    }

    /// Builds a sequence from feature rows (`d` rows of `T` values).
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        FeatureSequence::new(Matrix::from_rows(rows)?)
    }

    /// Builds a sequence from per-time-step feature vectors (`T` vectors of `d` values).
    pub fn from_time_steps<R: AsRef<[f64]>>(steps: &[R]) -> Result<Self> {
        FeatureSequence::new(Matrix::from_columns(steps)?)
    }

    /// Feature dimensionality.
    pub fn dim(&self) -> usize {
        self.values.rows()
    }

    /// Number of time steps.
    pub fn len(&self) -> usize {
        self.values.cols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn matrix(&self) -> &Matrix {
        &self.values
    }

    pub fn into_matrix(self) -> Matrix {
        self.values
    }

    /// Evolution function of feature `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        self.values.row(i)
    }

    /// Feature vector at time `t`.
    pub fn time_step(&self, t: usize) -> Vec<f64> {
        self.values.column(t)
    }

    /// Same sequence with columns taken in the given order (indices may repeat).
    pub fn select_time_steps(&self, indices: &[usize]) -> Result<FeatureSequence> {
        if indices.is_empty() {
            return Err(Error::value("time step selection is empty"));
        }
        if let Some(&bad) = indices.iter().find(|&&t| t >= self.len()) {
            return Err(Error::shape(format!(
                "time step {bad} out of range for T = {}",
                self.len()
            )));
        }
        let d = self.dim();
        let mut out = Matrix::zeros(d, indices.len());
        for i in 0..d {
            let src = self.values.row(i);
            for (dst, &t) in out.row_mut(i).iter_mut().zip(indices) {
                *dst = src[t];
            }
        }
        Ok(FeatureSequence { values: out })
    }

    /// Time-reversed copy.
    pub fn reversed(&self) -> FeatureSequence {
        let idx: Vec<usize> = (0..self.len()).rev().collect();
        self.select_time_steps(&idx).expect("indices in range")
    }

    pub fn scaled(&self, s: f64) -> FeatureSequence {
        FeatureSequence {
            values: self.values.scale(s),
        }
    }
}
