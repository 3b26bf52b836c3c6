//! Per-pixel label maps: dense segmentation maps, dense feature maps, the
//! feature-to-label baseline, and nearest-neighbor map sampling.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vocab::{classify, EmbeddingMatrix, LabelId};

/// H x W map of label ids, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentationMap {
    pub width: u32,
    pub height: u32,
    data: Vec<LabelId>,
}

impl SegmentationMap {
    /// `vocab_len` bounds the non-sentinel ids the map may contain.
    pub fn new(width: u32, height: u32, data: Vec<LabelId>, vocab_len: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput("segmentation map size must be positive".into()));
        }
        if data.len() != (width as usize) * (height as usize) {
            return Err(Error::ShapeMismatch(format!(
                "segmentation data length {} does not match {width}x{height}",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|id| !id.is_sentinel() && id.0 as usize >= vocab_len) {
            return Err(Error::InvalidInput(format!(
                "label id {} exceeds vocabulary of {vocab_len}",
                bad.0
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn data(&self) -> &[LabelId] {
        &self.data
    }

    pub fn at(&self, col: u32, row: u32) -> LabelId {
        self.data[row as usize * self.width as usize + col as usize]
    }
}

/// H x W x D feature map, row-major with the channel axis innermost.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap<S: Scalar> {
    pub width: u32,
    pub height: u32,
    pub channels: usize,
    data: Vec<S>,
}

impl<S: Scalar> FeatureMap<S> {
    pub fn new(width: u32, height: u32, channels: usize, data: Vec<S>) -> Result<Self> {
        if width == 0 || height == 0 || channels == 0 {
            return Err(Error::InvalidInput("feature map dimensions must be positive".into()));
        }
        if data.len() != (width as usize) * (height as usize) * channels {
            return Err(Error::ShapeMismatch(format!(
                "feature data length {} does not match {width}x{height}x{channels}",
                data.len()
            )));
        }
        Ok(Self { width, height, channels, data })
    }

    pub fn pixel(&self, col: u32, row: u32) -> &[S] {
        let i = (row as usize * self.width as usize + col as usize) * self.channels;
        &self.data[i..i + self.channels]
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }
}

/// Labels every pixel by cosine argmax of its feature vector against the
/// embedding rows. Pixels with zero-norm features become `UNLABELED`.
pub fn segment_from_features<S: Scalar>(
    features: &FeatureMap<S>,
    emb: &EmbeddingMatrix<S>,
) -> Result<SegmentationMap> {
    if features.channels != emb.dim() {
        return Err(Error::ShapeMismatch(format!(
            "feature channels {} do not match embedding dimension {}",
            features.channels,
            emb.dim()
        )));
    }
    if emb.is_empty() {
        return Err(Error::InvalidInput("embedding matrix is empty".into()));
    }
    let labels: Vec<LabelId> = features
        .data
        .par_chunks_exact(features.channels)
        .map(|feature| match classify(feature, emb) {
            Ok((id, _)) => id,
            Err(_) => LabelId::UNLABELED,
        })
        .collect();
    SegmentationMap::new(features.width, features.height, labels, emb.len())
}

/// Nearest-neighbor sampling at continuous pixel coordinates. Pixel `(i, j)`
/// covers the half-open square `[i, i+1) x [j, j+1)`; the in-bounds test is
/// strict on both sides (`0 < u < W`, `0 < v < H`), so a point exactly on the
/// left or top edge is out of bounds.
pub fn sample_nearest<S: Scalar>(map: &SegmentationMap, u: S, v: S) -> Result<LabelId> {
    let (w, h) = (S::of(map.width as f64), S::of(map.height as f64));
    if !(u > S::zero() && u < w && v > S::zero() && v < h) {
        return Err(Error::OutOfBounds {
            u: u.to_f64(),
            v: v.to_f64(),
            width: map.width,
            height: map.height,
        });
    }
    let col = u.floor().to_f64() as u32;
    let row = v.floor().to_f64() as u32;
    Ok(map.at(col.min(map.width - 1), row.min(map.height - 1)))
}
