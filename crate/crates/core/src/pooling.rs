//! Temporal pooling operators over [`FeatureSequence`]s.
//!
//! A basis column `g` pools a d×L sequence `F` into the coefficient vector
//! `F·g`. Basis indices in this module are 1-based (`j = 1` is the first
//! basis function, e.g. EEP₁).

use serde::Serialize;

use crate::basis::{BasisSet, BasisSource};
use crate::error::{Error, Result};
use crate::linalg::{dot, exact_dot, norm2, Matrix};
use crate::sequence::FeatureSequence;

pub const DEFAULT_WINDOW: usize = 16;
pub const DEFAULT_STRIDE: usize = 8;

const NORM_EPS: f64 = 1e-12;

/// Half-open range of time steps `[start, end)` a descriptor was pooled over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WindowSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Provenance {
    /// One tag per constituent, e.g. `eigen:1`, `dct:2`, `rank`, `max`.
    pub tags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowSpan>,
    pub normalized: bool,
}

impl Provenance {
    fn tagged(tag: String) -> Self {
        Provenance {
            tags: vec![tag],
            window: None,
            normalized: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PooledDescriptor {
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

impl PooledDescriptor {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn tag(&self) -> String {
        self.provenance.tags.join("+")
    }

    pub fn with_window(mut self, span: WindowSpan) -> Self {
        self.provenance.window = Some(span);
        self
    }
}

/// Tag for basis function `j` (1-based) of a basis set.
pub fn basis_tag(source: BasisSource, j: usize) -> String {
    match source {
        BasisSource::Eigen | BasisSource::Dct => format!("{source}:{j}"),
        BasisSource::Rank | BasisSource::Mean => source.to_string(),
    }
}

/// Indices of `L` evenly spaced time steps out of `T`, endpoints included:
/// `round(l·(T−1)/(L−1))`, or the middle step `round((T−1)/2)` when `L = 1`.
/// Ties round up. Indices repeat when `T < L`.
pub fn regular_indices(total: usize, len: usize) -> Vec<usize> {
    assert!(total >= 1 && len >= 1, "sampling needs T >= 1 and L >= 1");
    let last = total - 1;
    if len == 1 {
        return vec![last.div_ceil(2)];
    }
    let den = len - 1;
    // round(x / y) with ties up == floor((2x + y) / 2y), exact in integers
    (0..len).map(|l| (2 * l * last + den) / (2 * den)).collect()
}

/// Resamples a sequence to exactly `len` time steps at a regular interval.
pub fn sample_regular(seq: &FeatureSequence, len: usize) -> Result<FeatureSequence> {
    if len == 0 {
        return Err(Error::value("sampling length must be >= 1"));
    }
    if len == seq.len() {
        return Ok(seq.clone());
    }
    seq.select_time_steps(&regular_indices(seq.len(), len))
}

fn check_index(basis: &BasisSet, j: usize) -> Result<()> {
    if j == 0 || j > basis.count() {
        return Err(Error::value(format!(
            "basis index {j} outside 1..={}",
            basis.count()
        )));
    }
    Ok(())
}

fn check_length(seq: &FeatureSequence, basis: &BasisSet) -> Result<()> {
    if seq.len() != basis.len() {
        return Err(Error::shape(format!(
            "sequence has T = {} but the basis expects L = {}",
            seq.len(),
            basis.len()
        )));
    }
    Ok(())
}

/// Coefficients `F·g_j` of every feature row on basis function `j` (1-based).
///
/// Each coefficient is a correctly rounded sum of products, so permuting time
/// steps together with the weights gives bit-identical output.
pub fn pool(seq: &FeatureSequence, basis: &BasisSet, j: usize) -> Result<PooledDescriptor> {
    check_length(seq, basis)?;
    check_index(basis, j)?;
    let g = basis.vector(j - 1);
    let values = (0..seq.dim()).map(|i| exact_dot(seq.row(i), &g)).collect();
    Ok(PooledDescriptor {
        values,
        provenance: Provenance::tagged(basis_tag(basis.source(), j)),
    })
}

/// Pools with every basis function, in basis order.
pub fn pool_all(seq: &FeatureSequence, basis: &BasisSet) -> Result<Vec<PooledDescriptor>> {
    (1..=basis.count()).map(|j| pool(seq, basis, j)).collect()
}

/// Elementwise maximum over time.
pub fn pool_max(seq: &FeatureSequence) -> PooledDescriptor {
    let values = (0..seq.dim())
        .map(|i| seq.row(i).iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    PooledDescriptor {
        values,
        provenance: Provenance::tagged("max".into()),
    }
}

/// Elementwise mean over time; identical to pooling with `mean_weights(T)`.
pub fn pool_mean(seq: &FeatureSequence) -> PooledDescriptor {
    let basis = BasisSet::mean(seq.len()).expect("T >= 1");
    pool(seq, &basis, 1).expect("mean basis matches T")
}

fn require_orthonormal(basis: &BasisSet) -> Result<()> {
    if !basis.source().is_orthonormal() {
        return Err(Error::value(format!(
            "reconstruction needs an orthonormal basis, got {}",
            basis.source()
        )));
    }
    Ok(())
}

/// Projection `F·G·Gᵀ` of the sequence onto the span of the basis.
pub fn reconstruct(seq: &FeatureSequence, basis: &BasisSet) -> Result<FeatureSequence> {
    require_orthonormal(basis)?;
    check_length(seq, basis)?;
    let g = basis.matrix();
    let coeffs = seq.matrix().matmul(g)?;
    FeatureSequence::new(coeffs.matmul(&g.transpose())?)
}

/// `Σᵢ ‖GGᵀaᵢ − aᵢ‖²`, the squared Frobenius norm of the projection residual.
pub fn reconstruction_error(seq: &FeatureSequence, basis: &BasisSet) -> Result<f64> {
    let recon = reconstruct(seq, basis)?;
    Ok(seq
        .matrix()
        .as_slice()
        .iter()
        .zip(recon.matrix().as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum())
}

/// Start positions of sliding windows over `total` steps: `0, stride, 2·stride, …`
/// with the last window clamped to end at the final step. A sequence shorter
/// than the window gets one window at 0.
pub fn window_starts(total: usize, window: usize, stride: usize) -> Vec<usize> {
    assert!(window >= 1 && stride >= 1);
    if total <= window {
        return vec![0];
    }
    let last = total - window;
    let count = last.div_ceil(stride) + 1;
    (0..count).map(|i| (i * stride).min(last)).collect()
}

/// Pools each sliding window with all basis functions.
///
/// Returns one descriptor set per window position; each set holds one
/// descriptor per basis function. Sequences shorter than the window are
/// stretched to it by [`sample_regular`].
pub fn local_pool(
    seq: &FeatureSequence,
    basis: &BasisSet,
    window: usize,
    stride: usize,
) -> Result<Vec<Vec<PooledDescriptor>>> {
    if window < 2 {
        return Err(Error::value(format!("window must be >= 2, got {window}")));
    }
    if stride == 0 {
        return Err(Error::value("stride must be >= 1"));
    }
    if basis.len() != window {
        return Err(Error::shape(format!(
            "basis has L = {} but the window is {window}",
            basis.len()
        )));
    }
    window_starts(seq.len(), window, stride)
        .into_iter()
        .map(|start| {
            let end = (start + window).min(seq.len());
            let idx: Vec<usize> = (start..end).collect();
            let chunk = sample_regular(&seq.select_time_steps(&idx)?, window)?;
            let span = WindowSpan { start, end };
            Ok(pool_all(&chunk, basis)?
                .into_iter()
                .map(|d| d.with_window(span))
                .collect())
        })
        .collect()
}

/// Scales to unit Euclidean norm; vectors with norm ≤ 1e-12 are returned unchanged.
pub fn l2_normalize(desc: &PooledDescriptor) -> PooledDescriptor {
    let n = norm2(&desc.values);
    let values = if n > NORM_EPS {
        desc.values.iter().map(|v| v / n).collect()
    } else {
        desc.values.clone()
    };
    let mut provenance = desc.provenance.clone();
    provenance.normalized = true;
    PooledDescriptor { values, provenance }
}

/// Joins descriptors in order.
pub fn concat(descs: &[PooledDescriptor]) -> Result<PooledDescriptor> {
    let first = descs
        .first()
        .ok_or_else(|| Error::value("cannot concatenate an empty descriptor list"))?;
    let mut values = Vec::with_capacity(descs.iter().map(|d| d.dim()).sum());
    let mut tags = Vec::new();
    for d in descs {
        values.extend_from_slice(&d.values);
        tags.extend(d.provenance.tags.iter().cloned());
    }
    let window = first.provenance.window;
    let same_window = descs.iter().all(|d| d.provenance.window == window);
    Ok(PooledDescriptor {
        values,
        provenance: Provenance {
            tags,
            window: if same_window { window } else { None },
            normalized: descs.iter().all(|d| d.provenance.normalized),
        },
    })
}

/// Per-stream L2 normalization followed by concatenation.
pub fn fuse_streams(streams: &[PooledDescriptor]) -> Result<PooledDescriptor> {
    let normalized: Vec<PooledDescriptor> = streams.iter().map(l2_normalize).collect();
    concat(&normalized)
}

/// Descriptor matrix with one row per descriptor.
pub fn stack(descs: &[PooledDescriptor]) -> Result<Matrix> {
    Matrix::from_rows(
        &descs
            .iter()
            .map(|d| d.values.as_slice())
            .collect::<Vec<_>>(),
    )
}

/// Cosine similarity of two vectors (0 when either is zero).
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (norm2(a), norm2(b));
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot(a, b) / (na * nb)
    }
}
