//! Scalar abstraction for the closed-form geometry and the quadrature code.

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};

/// Floating point scalar used by the generic geometry: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance used for tangency and boundary tie-breaking decisions.
    fn geom_eps() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal is representable")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Real for f64 {
    #[inline]
    fn geom_eps() -> Self {
        1e-12
    }
}

impl Real for f32 {
    #[inline]
    fn geom_eps() -> Self {
        1e-5
    }
}
