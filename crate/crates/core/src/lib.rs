//! Eigen evolution pooling.
//!
//! Summarizes a d×T sequence of feature vectors by projecting the evolution
//! of each feature onto temporal basis functions. The bases are learned as
//! the leading eigenvectors of the time-step second-moment matrix `Σ FᵀF`
//! over a corpus, or taken from the DCT-II, rank-pooling, or mean weights.
//! Applied to raw RGB frames, the same operators produce eigen images and
//! dynamic images.

pub mod basis;
pub mod bench;
pub mod error;
pub mod formats;
pub mod image;
pub mod linalg;
pub mod pooling;
pub mod ppm;
pub mod sequence;

pub use basis::{BasisSet, BasisSource, EigenSpectrum, TimeCovariance};
pub use error::{Error, Result};
pub use image::{FrameSequence, PooledImage};
pub use linalg::Matrix;
pub use pooling::PooledDescriptor;
pub use ppm::Frame;
pub use sequence::FeatureSequence;
