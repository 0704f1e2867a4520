//! Scalar abstraction: every geometric routine is generic over [`Real`].

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar used by the geometry: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + 'static {}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal (tolerances, constants) into the working scalar.
pub(crate) fn lit<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("finite f64 literal")
}
