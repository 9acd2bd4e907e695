//! Floating-point scalar abstraction shared by every analysis.
//!
//! All numerics are written against [`Real`], which is implemented for `f32`
//! and `f64`. Default tolerances are tuned for `f64`; the `f32` instantiation
//! widens them through [`Real::eps`] where a fixed literal would be below
//! machine precision.

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar usable by the analyses.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + 'static {
    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::lit(n as f64)
    }

    /// Machine epsilon.
    fn eps() -> Self {
        Self::default_epsilon()
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `max(value, factor * eps)`; keeps `f64`-tuned tolerances meaningful for `f32`.
    fn tol(value: f64, factor: f64) -> Self {
        Self::lit(value).max(Self::lit(factor) * Self::eps())
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub(crate) fn c64<R: Real>(z: Complex<R>) -> Complex<f64> {
    Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}
