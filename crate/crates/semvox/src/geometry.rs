//! Rigid transforms, pinhole cameras, and point projection — the coordinate
//! backbone of every pipeline stage.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Orthonormality tolerance accepted when validating ingested rotations.
const ORTHONORMAL_TOL: f64 = 1e-6;

/// A proper rigid motion: `p -> R p + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidTransform<S: Scalar> {
    pub rotation: Matrix3<S>,
    pub translation: Vector3<S>,
}

impl<S: Scalar> RigidTransform<S> {
    pub fn identity() -> Self {
        Self { rotation: Matrix3::identity(), translation: Vector3::zeros() }
    }

    /// Builds a transform, rejecting rotations that are not orthonormal with
    /// determinant +1 within `1e-6`.
    pub fn new(rotation: Matrix3<S>, translation: Vector3<S>) -> Result<Self> {
        let tol = S::of(ORTHONORMAL_TOL);
        let gram = rotation * rotation.transpose();
        let drift = (gram - Matrix3::identity()).abs().max();
        if drift > tol {
            return Err(Error::InvalidInput(format!(
                "rotation is not orthonormal: max |R R^T - I| = {:.3e}",
                drift.to_f64()
            )));
        }
        let det = rotation.determinant();
        if (det - S::one()).abs() > tol {
            return Err(Error::InvalidInput(format!(
                "rotation determinant {} is not +1",
                det.to_f64()
            )));
        }
        Ok(Self { rotation, translation })
    }

    /// Rotation about the z axis by `yaw` radians plus a translation; the
    /// pose parameterization used for ego poses and object boxes.
    pub fn from_yaw_translation(yaw: S, translation: Vector3<S>) -> Self {
        let (sin, cos) = (yaw.sin(), yaw.cos());
        let rotation = Matrix3::new(
            cos, -sin, S::zero(),
            sin, cos, S::zero(),
            S::zero(), S::zero(), S::one(),
        );
        Self { rotation, translation }
    }

    pub fn apply(&self, point: &Vector3<S>) -> Vector3<S> {
        self.rotation * point + self.translation
    }

    /// `(a.compose(b))(p) = a(b(p))`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn invert(&self) -> Self {
        let rotation = self.rotation.transpose();
        Self { rotation, translation: -(rotation * self.translation) }
    }
}

/// Pinhole camera: intrinsic matrix plus the rigid transform taking ego-frame
/// points into the camera frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CameraModel<S: Scalar> {
    pub intrinsics: Matrix3<S>,
    pub cam_from_ego: RigidTransform<S>,
    pub width: u32,
    pub height: u32,
}

impl<S: Scalar> CameraModel<S> {
    pub fn new(
        intrinsics: Matrix3<S>,
        cam_from_ego: RigidTransform<S>,
        width: u32,
        height: u32,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput("camera size must be positive".into()));
        }
        if intrinsics[(2, 2)] != S::one() {
            return Err(Error::InvalidInput("intrinsics K[2][2] must be 1".into()));
        }
        if intrinsics[(0, 0)] <= S::zero() || intrinsics[(1, 1)] <= S::zero() {
            return Err(Error::InvalidInput("focal lengths must be positive".into()));
        }
        let lower = intrinsics[(1, 0)].abs() + intrinsics[(2, 0)].abs() + intrinsics[(2, 1)].abs();
        if lower > S::of(1e-9) {
            return Err(Error::InvalidInput("intrinsics must be upper triangular".into()));
        }
        Ok(Self { intrinsics, cam_from_ego, width, height })
    }

    /// Projects an ego-frame point to continuous pixel coordinates plus its
    /// camera-frame depth. `None` when the point is at or behind the image
    /// plane (depth <= 0).
    pub fn project(&self, point_ego: &Vector3<S>) -> Option<(S, S, S)> {
        let cam = self.cam_from_ego.apply(point_ego);
        let h = self.intrinsics * cam;
        let depth = h.z;
        if depth <= S::zero() {
            return None;
        }
        Some((h.x / depth, h.y / depth, depth))
    }

    /// True when continuous pixel coordinates fall strictly inside the image:
    /// `0 < u < W` and `0 < v < H`.
    pub fn in_bounds(&self, u: S, v: S) -> bool {
        u > S::zero() && u < S::of(self.width as f64) && v > S::zero() && v < S::of(self.height as f64)
    }
}

/// World-from-ego pose of one frame of a sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct EgoPose<S: Scalar> {
    pub world_from_ego: RigidTransform<S>,
    pub frame_index: usize,
}
