//! LiDAR point clouds and the transfer of per-pixel text labels onto points
//! via multi-camera projection with min-depth camera selection.

use nalgebra::Vector3;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::CameraModel;
use crate::pixel::{sample_nearest, SegmentationMap};
use crate::scalar::Scalar;
use crate::vocab::LabelId;

/// One frame of ego-frame points with optional per-point labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud<S: Scalar> {
    pub frame_index: usize,
    points: Vec<Vector3<S>>,
    labels: Option<Vec<LabelId>>,
}

impl<S: Scalar> PointCloud<S> {
    pub fn new(
        frame_index: usize,
        points: Vec<Vector3<S>>,
        labels: Option<Vec<LabelId>>,
    ) -> Result<Self> {
        if let Some(labels) = &labels {
            if labels.len() != points.len() {
                return Err(Error::ShapeMismatch(format!(
                    "{} labels for {} points",
                    labels.len(),
                    points.len()
                )));
            }
        }
        if let Some(p) = points.iter().find(|p| !(p.x.finite() && p.y.finite() && p.z.finite())) {
            return Err(Error::InvalidInput(format!(
                "non-finite point coordinates ({}, {}, {})",
                p.x.to_f64(),
                p.y.to_f64(),
                p.z.to_f64()
            )));
        }
        Ok(Self { frame_index, points, labels })
    }

    pub fn unlabeled(frame_index: usize, points: Vec<Vector3<S>>) -> Result<Self> {
        Self::new(frame_index, points, None)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vector3<S>] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[LabelId]> {
        self.labels.as_deref()
    }

    /// Replaces each label through a per-id translation table (id -> new id).
    /// Sentinels pass through unchanged.
    pub fn remap_labels(&self, table: &[LabelId]) -> Result<Self> {
        let labels = self
            .labels
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("cloud has no labels to remap".into()))?;
        let remapped = labels
            .iter()
            .map(|id| match id.index() {
                Some(i) if i < table.len() => Ok(table[i]),
                Some(i) => Err(Error::InvalidInput(format!("label id {i} outside remap table"))),
                None => Ok(*id),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { frame_index: self.frame_index, points: self.points.clone(), labels: Some(remapped) })
    }
}

/// Labels one point: project into every camera, keep candidates with positive
/// depth и strictly in-bounds pixels, pick the camera with the smallest depth
/// (ties toward the smaller camera index), and sample its map.
fn label_point<S: Scalar>(
    point: &Vector3<S>,
    rig: &[CameraModel<S>],
    maps: &[SegmentationMap],
) -> LabelId {
    let mut best: Option<(S, usize, S, S)> = None;
    for (i, cam) in rig.iter().enumerate() {
        let Some((u, v, depth)) = cam.project(point) else { continue };
        if !cam.in_bounds(u, v) {
            continue;
        }
        let better = match &best {
            Some((best_depth, _, _, _)) => depth < *best_depth,
            None => true,
        };
        if better {
            best = Some((depth, i, u, v));
        }
    }
    match best {
        // In-bounds was checked against the camera, whose size the map shares.
        Some((_, i, u, v)) => sample_nearest(&maps[i], u, v).expect("checked in bounds"),
        None => LabelId::UNLABELED,
    }
}

/// Transfers text labels from segmentation maps onto every point of `cloud`.
/// Points visible in no camera are kept and marked `UNLABELED`. Output order
/// equals input order and the result is identical for any worker count.
pub fn assign_point_labels<S: Scalar>(
    cloud: &PointCloud<S>,
    rig: &[CameraModel<S>],
    maps: &[SegmentationMap],
) -> Result<PointCloud<S>> {
    if rig.len() != maps.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} cameras but {} segmentation maps",
            rig.len(),
            maps.len()
        )));
    }
    for (i, (cam, map)) in rig.iter().zip(maps).enumerate() {
        if cam.width != map.width || cam.height != map.height {
            return Err(Error::ShapeMismatch(format!(
                "camera {i} is {}x{} but its map is {}x{}",
                cam.width, cam.height, map.width, map.height
            )));
        }
    }
    let labels: Vec<LabelId> =
        cloud.points.par_iter().map(|p| label_point(p, rig, maps)).collect();
    Ok(PointCloud { frame_index: cloud.frame_index, points: cloud.points.clone(), labels: Some(labels) })
}
