//! Floating-point scalar abstraction: all geometry, loss, and training math
//! is generic over [`Scalar`], instantiated as `f32` or `f64`.

use nalgebra::RealField;
use num_traits::{FromPrimitive, NumCast};

/// Real scalar usable for geometry and gradient math: `f32` or `f64`.
pub trait Scalar: RealField + FromPrimitive + NumCast + Copy + Default {
    /// `true` when the value is neither NaN nor infinite.
    fn finite(self) -> bool;

    /// Lossy conversion to `f64` for reporting.
    fn to_f64(self) -> f64;

    /// Conversion from an `f64` constant. Panics only for values outside the
    /// target type's range, which never happens for the literals we feed it.
    fn of(value: f64) -> Self {
        <Self as FromPrimitive>::from_f64(value).expect("constant representable in scalar type")
    }
}

impl Scalar for f32 {
    fn finite(self) -> bool {
        self.is_finite()
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn finite(self) -> bool {
        self.is_finite()
    }
    fn to_f64(self) -> f64 {
        self
    }
}
