//! Eigen images and dynamic images: temporal pooling applied directly to the
//! RGB values of video frames.
//!
//! A frame is flattened to a column of d = W·H·3 intensities in row-major
//! (y, x, channel) order, so a clip becomes a d×T [`FeatureSequence`] and any
//! basis function pools it into one float image.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::basis::BasisSet;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::pooling::{self, Provenance, WindowSpan};
use crate::ppm::{self, Frame};
use crate::sequence::FeatureSequence;

/// Frames sampled for a global eigen image.
pub const GLOBAL_EIGEN_FRAMES: usize = 25;

const RANGE_EPS: f64 = 1e-12;

/// Nonempty list of equally sized RGB frames.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    frames: Vec<Frame>,
}

impl FrameSequence {
    pub fn new(frames: Vec<Frame>) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::value("frame sequence is empty"))?;
        let (w, h) = (first.width, first.height);
        if let Some((i, f)) = frames
            .iter()
            .enumerate()
            .find(|(_, f)| (f.width, f.height) != (w, h))
        {
            return Err(Error::shape(format!(
                "frame {i} is {}x{}, expected {w}x{h}",
                f.width, f.height
            )));
        }
        Ok(FrameSequence { frames })
    }

    /// Loads every `.ppm` file in a directory, sorted by file name.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let paths = ppm_paths(dir)?;
        if paths.is_empty() {
            return Err(Error::format(dir, "directory contains no .ppm frames"));
        }
        let frames = paths
            .par_iter()
            .map(|p| ppm::read_ppm(p))
            .collect::<Result<Vec<_>>>()?;
        FrameSequence::new(frames).map_err(|e| Error::format(dir, e.to_string()))
    }

    pub fn width(&self) -> usize {
        self.frames[0].width
    }

    pub fn height(&self) -> usize {
        self.frames[0].height
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    /// Values per flattened frame.
    pub fn pixel_dim(&self) -> usize {
        self.width() * self.height() * 3
    }

    /// All frames as a d×T sequence, without resampling.
    pub fn to_sequence(&self) -> FeatureSequence {
        self.columns(&(0..self.len()).collect::<Vec<_>>())
    }

    fn columns(&self, indices: &[usize]) -> FeatureSequence {
        let d = self.pixel_dim();
        let mut m = Matrix::zeros(d, indices.len());
        for (col, &t) in indices.iter().enumerate() {
            for (i, &v) in self.frames[t].data.iter().enumerate() {
                m[(i, col)] = v as f64;
            }
        }
        FeatureSequence::new(m).expect("frames are nonempty and finite")
    }
}

/// `.ppm` files in `dir`, in lexicographic file-name order.
pub fn ppm_paths(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file()
            && path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("ppm"))
        {
            paths.push(path);
        }
    }
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(paths)
}

/// Samples `len` frames at a regular interval and flattens each to a column.
pub fn vectorize(frames: &FrameSequence, len: usize) -> Result<FeatureSequence> {
    if len == 0 {
        return Err(Error::value("sampling length must be >= 1"));
    }
    Ok(frames.columns(&pooling::regular_indices(frames.len(), len)))
}

/// Float H×W×3 image produced by pooling, before any rescaling.
#[derive(Debug, Clone, PartialEq)]
pub struct PooledImage {
    pub width: usize,
    pub height: usize,
    /// Row-major (y, x, channel).
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

impl PooledImage {
    fn from_descriptor(width: usize, height: usize, desc: pooling::PooledDescriptor) -> Self {
        debug_assert_eq!(desc.values.len(), width * height * 3);
        PooledImage {
            width,
            height,
            values: desc.values,
            provenance: desc.provenance,
        }
    }

    pub fn tag(&self) -> String {
        self.provenance.tags.join("+")
    }

    /// The image as a d×1 sequence (d = W·H·3), for raw export.
    pub fn to_sequence(&self) -> FeatureSequence {
        FeatureSequence::new(
            Matrix::new(self.values.len(), 1, self.values.clone()).expect("shape matches"),
        )
        .expect("pooled values are finite")
    }

    pub fn max_abs_diff(&self, other: &PooledImage) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

fn whole(frames: &FrameSequence) -> WindowSpan {
    WindowSpan {
        start: 0,
        end: frames.len(),
    }
}

/// Pools `len = basis.len()` regularly sampled frames with basis function `j` (1-based).
pub fn eigen_image(frames: &FrameSequence, basis: &BasisSet, j: usize) -> Result<PooledImage> {
    let seq = vectorize(frames, basis.len())?;
    let desc = pooling::pool(&seq, basis, j)?.with_window(whole(frames));
    Ok(PooledImage::from_descriptor(
        frames.width(),
        frames.height(),
        desc,
    ))
}

/// Images for every basis function in every sliding window; indexed `[window][basis]`.
pub fn local_images(
    frames: &FrameSequence,
    basis: &BasisSet,
    window: usize,
    stride: usize,
) -> Result<Vec<Vec<PooledImage>>> {
    let seq = frames.to_sequence();
    let (w, h) = (frames.width(), frames.height());
    Ok(pooling::local_pool(&seq, basis, window, stride)?
        .into_iter()
        .map(|set| {
            set.into_iter()
                .map(|d| PooledImage::from_descriptor(w, h, d))
                .collect()
        })
        .collect())
}

/// Global dynamic image: rank-pooling weights over all T frames, no resampling.
pub fn dynamic_image(frames: &FrameSequence) -> Result<PooledImage> {
    if frames.len() < 2 {
        return Err(Error::value("a dynamic image needs at least 2 frames"));
    }
    let basis = BasisSet::rank(frames.len())?;
    let desc = pooling::pool(&frames.to_sequence(), &basis, 1)?.with_window(whole(frames));
    Ok(PooledImage::from_descriptor(
        frames.width(),
        frames.height(),
        desc,
    ))
}

/// Dynamic images within sliding windows, rank weights of the window length.
pub fn local_dynamic_images(
    frames: &FrameSequence,
    window: usize,
    stride: usize,
) -> Result<Vec<PooledImage>> {
    let basis = BasisSet::rank(window)?;
    Ok(local_images(frames, &basis, window, stride)?
        .into_iter()
        .flatten()
        .collect())
}

/// Min-max maps all pixels and channels jointly onto `[0, 255]`, rounding
/// halves up. A range of at most 1e-12 maps everything to 128.
pub fn rescale_to_u8(img: &PooledImage) -> Frame {
    let (lo, hi) = img
        .values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let range = hi - lo;
    let data = if !(range > RANGE_EPS) {
        vec![128u8; img.values.len()]
    } else {
        img.values
            .iter()
            .map(|&v| (255.0 * (v - lo) / range + 0.5).floor().clamp(0.0, 255.0) as u8)
            .collect()
    };
    Frame::new(img.width, img.height, data).expect("pooled image has frame shape")
}

/// Frame `t` (0-based, among the `basis.len()` sampled frames) of the projection
/// `F·G·Gᵀ`, as a float image.
pub fn reconstruct_frame(
    frames: &FrameSequence,
    basis: &BasisSet,
    t: usize,
) -> Result<PooledImage> {
    if t >= basis.len() {
        return Err(Error::value(format!(
            "frame index {t} outside the {} sampled frames",
            basis.len()
        )));
    }
    let seq = vectorize(frames, basis.len())?;
    let recon = pooling::reconstruct(&seq, basis)?;
    Ok(PooledImage {
        width: frames.width(),
        height: frames.height(),
        values: recon.time_step(t),
        provenance: Provenance {
            tags: vec![format!("reconstruct:{}", t)],
            window: None,
            normalized: false,
        },
    })
}
