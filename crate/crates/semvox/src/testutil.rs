//! Shared helpers for unit tests.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

use crate::geometry::RigidTransform;

/// Random proper rotation from three composed axis rotations.
pub fn random_rotation(rng: &mut impl Rng) -> Matrix3<f64> {
    let (a, b, c): (f64, f64, f64) =
        (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
    let rx = Matrix3::new(1.0, 0.0, 0.0, 0.0, a.cos(), -a.sin(), 0.0, a.sin(), a.cos());
    let ry = Matrix3::new(b.cos(), 0.0, b.sin(), 0.0, 1.0, 0.0, -b.sin(), 0.0, b.cos());
    let rz = Matrix3::new(c.cos(), -c.sin(), 0.0, c.sin(), c.cos(), 0.0, 0.0, 0.0, 1.0);
    rz * ry * rx
}

pub fn random_transform(rng: &mut impl Rng) -> RigidTransform<f64> {
    RigidTransform {
        rotation: random_rotation(rng),
        translation: Vector3::new(
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
        ),
    }
}
