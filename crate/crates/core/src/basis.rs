//! Temporal basis sets: learned eigen evolution functions, the orthonormal
//! DCT-II approximation, rank-pooling weights, and uniform mean weights.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats;
use crate::linalg::{symmetric_eigh, Matrix};
use crate::sequence::FeatureSequence;

/// Tolerance for `GᵀG = I` on orthonormal bases.
pub const ORTHONORMAL_TOL: f64 = 1e-9;

/// Sequences per partial accumulator in [`TimeCovariance::from_sequences`].
const ACCUMULATE_CHUNK: usize = 64;

/// L×L accumulator of uncentered second moments between time steps, `Σ FᵀF`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeCovariance {
    matrix: Matrix,
    sequence_count: usize,
}

impl TimeCovariance {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::value("time covariance needs L >= 1"));
        }
        Ok(TimeCovariance {
            matrix: Matrix::zeros(len, len),
            sequence_count: 0,
        })
    }

    /// Restores an accumulator from stored parts, e.g. a saved partial sum.
    pub fn from_parts(matrix: Matrix, sequence_count: usize) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::shape(format!(
                "time covariance must be square and nonempty, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_symmetric(ORTHONORMAL_TOL * matrix.max_abs().max(1.0)) {
            return Err(Error::value("time covariance is not symmetric"));
        }
        Ok(TimeCovariance {
            matrix,
            sequence_count,
        })
    }

    /// Accumulates a whole corpus. Partial sums over fixed-size chunks run in
    /// parallel and are merged in corpus order, so the result does not depend
    /// on the thread count.
    pub fn from_sequences(len: usize, sequences: &[FeatureSequence]) -> Result<Self> {
        let partials = sequences
            .par_chunks(ACCUMULATE_CHUNK)
            .map(|chunk| {
                let mut cov = TimeCovariance::new(len)?;
                for seq in chunk {
                    cov.accumulate(seq)?;
                }
                Ok(cov)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut total = TimeCovariance::new(len)?;
        for part in &partials {
            total.merge(part)?;
        }
        Ok(total)
    }

    /// Number of time steps L.
    pub fn len(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence_count == 0
    }

    pub fn sequence_count(&self) -> usize {
        self.sequence_count
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Adds `FᵀF` for a sequence that already has exactly L time steps.
    pub fn accumulate(&mut self, seq: &FeatureSequence) -> Result<()> {
        let len = self.len();
        if seq.len() != len {
            return Err(Error::shape(format!(
                "sequence has T = {}, accumulator expects L = {len}",
                seq.len()
            )));
        }
        for i in 0..seq.dim() {
            let a = seq.row(i);
            for s in 0..len {
                if a[s] == 0.0 {
                    continue;
                }
                for t in s..len {
                    self.matrix[(s, t)] += a[s] * a[t];
                }
            }
        }
        for s in 0..len {
            for t in s + 1..len {
                self.matrix[(t, s)] = self.matrix[(s, t)];
            }
        }
        self.sequence_count += 1;
        Ok(())
    }

    /// Functional form of [`accumulate`](Self::accumulate).
    pub fn with(mut self, seq: &FeatureSequence) -> Result<Self> {
        self.accumulate(seq)?;
        Ok(self)
    }

    /// Adds another partial accumulator over the same L.
    pub fn merge(&mut self, other: &TimeCovariance) -> Result<()> {
        if other.len() != self.len() {
            return Err(Error::shape(format!(
                "cannot merge accumulators with L = {} and L = {}",
                self.len(),
                other.len()
            )));
        }
        self.matrix = self.matrix.add(&other.matrix)?;
        self.sequence_count += other.sequence_count;
        Ok(())
    }

    /// Eigendecomposition of the accumulated matrix.
    pub fn fit_eigen(&self) -> Result<EigenSpectrum> {
        if self.sequence_count == 0 {
            return Err(Error::State(
                "cannot fit eigen evolutions on an empty accumulator".into(),
            ));
        }
        let (eigenvalues, eigenvectors) = symmetric_eigh(&self.matrix)?;
        Ok(EigenSpectrum {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = CovarianceFile {
            len: self.len(),
            sequence_count: self.sequence_count,
            matrix: (0..self.len())
                .map(|i| self.matrix.row(i).to_vec())
                .collect(),
        };
        formats::write_atomic(path, formats::to_json_bytes(&file)?.as_slice())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = formats::read_to_string(path)?;
        let file: CovarianceFile = serde_json::from_str(&text)
            .map_err(|e| Error::format(path, format!("invalid covariance file: {e}")))?;
        let matrix =
            Matrix::from_rows(&file.matrix).map_err(|e| Error::format(path, e.to_string()))?;
        if matrix.rows() != file.len {
            return Err(Error::format(
                path,
                format!(
                    "declared L = {} but matrix has {} rows",
                    file.len,
                    matrix.rows()
                ),
            ));
        }
        TimeCovariance::from_parts(matrix, file.sequence_count)
            .map_err(|e| Error::format(path, e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct CovarianceFile {
    #[serde(rename = "L")]
    len: usize,
    sequence_count: usize,
    matrix: Vec<Vec<f64>>,
}

/// Eigenvalues in descending order with their eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Matrix,
}

impl EigenSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    /// `Σ_{j>k} λ_j`: the training reconstruction error of the top-k basis.
    pub fn tail_energy(&self, k: usize) -> f64 {
        self.eigenvalues.iter().skip(k).sum()
    }

    /// Fraction of total energy captured by the first k eigenvalues, for k = 1..=L.
    pub fn cumulative_energy(&self) -> Vec<f64> {
        cumulative_energy(&self.eigenvalues)
    }

    /// The top-k eigen evolution functions as a basis.
    pub fn take_basis(&self, k: usize) -> Result<BasisSet> {
        if k == 0 || k > self.len() {
            return Err(Error::value(format!(
                "basis size k = {k} outside 1..={}",
                self.len()
            )));
        }
        Ok(BasisSet {
            vectors: self.eigenvectors.leading_columns(k),
            source: BasisSource::Eigen,
            eigenvalues: Some(self.eigenvalues.clone()),
        })
    }
}

pub fn cumulative_energy(eigenvalues: &[f64]) -> Vec<f64> {
    let total: f64 = eigenvalues.iter().sum();
    let mut acc = 0.0;
    eigenvalues
        .iter()
        .map(|v| {
            acc += v;
            if total > 0.0 {
                acc / total
            } else {
                0.0
            }
        })
        .collect()
}

const TAIL_FLOOR: f64 = 1e-6;

/// Relative gap between a measured training reconstruction error and the
/// eigenvalue tail `Σ_{j>k} λ_j` that it should equal.
///
/// The gap is scaled by the tail, floored at `1e-6` of the total energy.
/// Tails below the floor are eigenvalues at roundoff level (rank-deficient
/// corpora, complete bases), which no relative comparison can resolve.
pub fn residual_gap(error: f64, tail: f64, total_energy: f64) -> f64 {
    let scale = tail.abs().max(TAIL_FLOOR * total_energy.abs());
    if scale == 0.0 {
        return error.abs();
    }
    (error - tail).abs() / scale
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisSource {
    Eigen,
    Dct,
    Rank,
    Mean,
}

impl BasisSource {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisSource::Eigen => "eigen",
            BasisSource::Dct => "dct",
            BasisSource::Rank => "rank",
            BasisSource::Mean => "mean",
        }
    }

    /// Whether bases of this kind have orthonormal columns.
    pub fn is_orthonormal(self) -> bool {
        matches!(self, BasisSource::Eigen | BasisSource::Dct)
    }
}

impl fmt::Display for BasisSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eigen" => Ok(BasisSource::Eigen),
            "dct" => Ok(BasisSource::Dct),
            "rank" => Ok(BasisSource::Rank),
            "mean" => Ok(BasisSource::Mean),
            other => Err(Error::value(format!("unknown basis source `{other}`"))),
        }
    }
}

/// L×k matrix of temporal weight functions `G = [g₁ … g_k]`.
///
/// Eigen and DCT bases are column-orthonormal. Rank and mean bases hold a
/// single, unnormalized weight column. For eigen bases the full spectrum
/// λ₁…λ_L is kept alongside the vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    vectors: Matrix,
    source: BasisSource,
    eigenvalues: Option<Vec<f64>>,
}

impl BasisSet {
    /// Validates and wraps an L×k matrix of basis columns.
    pub fn new(
        vectors: Matrix,
        source: BasisSource,
        eigenvalues: Option<Vec<f64>>,
    ) -> Result<Self> {
        let (len, k) = vectors.shape();
        if len == 0 || k == 0 || k > len {
            return Err(Error::value(format!(
                "basis must satisfy 1 <= k <= L, got L = {len}, k = {k}"
            )));
        }
        match source {
            BasisSource::Rank | BasisSource::Mean if k != 1 => {
                return Err(Error::value(format!(
                    "{source} basis must have a single column, got {k}"
                )));
            }
            _ => {}
        }
        if eigenvalues.is_some() != (source == BasisSource::Eigen) {
            return Err(Error::value(
                "eigenvalues must be present exactly for eigen bases",
            ));
        }
        let basis = BasisSet {
            vectors,
            source,
            eigenvalues,
        };
        if source.is_orthonormal() && basis.orthonormality_error() > ORTHONORMAL_TOL {
            return Err(Error::value(format!(
                "{source} basis columns are not orthonormal (max |GᵀG - I| = {:e})",
                basis.orthonormality_error()
            )));
        }
        Ok(basis)
    }

    /// Orthonormal DCT-II basis with the first `k` frequencies.
    pub fn dct(len: usize, k: usize) -> Result<Self> {
        if len == 0 || k == 0 || k > len {
            return Err(Error::value(format!(
                "DCT basis must satisfy 1 <= k <= L, got L = {len}, k = {k}"
            )));
        }
        let n = len as f64;
        let mut g = Matrix::zeros(len, k);
        for j in 0..k {
            let scale = if j == 0 {
                (1.0 / n).sqrt()
            } else {
                (2.0 / n).sqrt()
            };
            for t in 0..len {
                g[(t, j)] = scale * (PI * j as f64 * (2 * t + 1) as f64 / (2.0 * n)).cos();
            }
        }
        Ok(BasisSet {
            vectors: g,
            source: BasisSource::Dct,
            eigenvalues: None,
        })
    }

    /// Rank-pooling weights `α_l = Σ_{t=l}^{L} (2t − L − 1)/t`.
    pub fn rank(len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::value(format!("rank weights need L >= 2, got {len}")));
        }
        let n = len as f64;
        let mut alpha = vec![0.0; len];
        // suffix sums, 1-based t
        let mut acc = 0.0;
        for t in (1..=len).rev() {
            let tf = t as f64;
            acc += (2.0 * tf - n - 1.0) / tf;
            alpha[t - 1] = acc;
        }
        Ok(BasisSet {
            vectors: Matrix::new(len, 1, alpha)?,
            source: BasisSource::Rank,
            eigenvalues: None,
        })
    }

    /// Uniform weights `1/L`.
    pub fn mean(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::value("mean weights need L >= 1"));
        }
        Ok(BasisSet {
            vectors: Matrix::new(len, 1, vec![1.0 / len as f64; len])?,
            source: BasisSource::Mean,
            eigenvalues: None,
        })
    }

    /// Number of time steps L.
    pub fn len(&self) -> usize {
        self.vectors.rows()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of basis functions k.
    pub fn count(&self) -> usize {
        self.vectors.cols()
    }

    pub fn source(&self) -> BasisSource {
        self.source
    }

    pub fn matrix(&self) -> &Matrix {
        &self.vectors
    }

    pub fn eigenvalues(&self) -> Option<&[f64]> {
        self.eigenvalues.as_deref()
    }

    /// Basis column by 0-based position.
    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.vectors.column(j)
    }

    /// Keeps the first k columns.
    pub fn truncated(&self, k: usize) -> Result<BasisSet> {
        if k == 0 || k > self.count() {
            return Err(Error::value(format!(
                "cannot truncate a {}-column basis to k = {k}",
                self.count()
            )));
        }
        Ok(BasisSet {
            vectors: self.vectors.leading_columns(k),
            source: self.source,
            eigenvalues: self.eigenvalues.clone(),
        })
    }

    /// `max |GᵀG − I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let gram = self
            .vectors
            .transpose()
            .matmul(&self.vectors)
            .expect("GᵀG is always conformable");
        gram.max_abs_diff(&Matrix::identity(self.count()))
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        let file = BasisFile {
            len: self.len(),
            k: self.count(),
            source: self.source,
            eigenvalues: self.eigenvalues.clone(),
            vectors: (0..self.count()).map(|j| self.vector(j)).collect(),
        };
        formats::to_json_bytes(&file)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: BasisFile = serde_json::from_str(text)?;
        if file.vectors.len() != file.k {
            return Err(Error::shape(format!(
                "declared k = {} but {} vectors present",
                file.k,
                file.vectors.len()
            )));
        }
        if let Some(bad) = file.vectors.iter().position(|v| v.len() != file.len) {
            return Err(Error::shape(format!(
                "vector {} has {} entries, declared L = {}",
                bad + 1,
                file.vectors[bad].len(),
                file.len
            )));
        }
        let vectors = Matrix::from_columns(&file.vectors)?;
        BasisSet::new(vectors, file.source, file.eigenvalues)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        formats::write_atomic(path, &self.to_json()?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = formats::read_to_string(path)?;
        BasisSet::from_json(&text).map_err(|e| Error::format(path, e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct BasisFile {
    #[serde(rename = "L")]
    len: usize,
    k: usize,
    source: BasisSource,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    eigenvalues: Option<Vec<f64>>,
    vectors: Vec<Vec<f64>>,
}
