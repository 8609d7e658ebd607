//! Scalar abstraction.
//!
//! Everything in this crate is generic over [`Real`], implemented for `f32`
//! and `f64`. Concrete type aliases live at the crate root. The large-window
//! estimators accumulate millions of terms, so `f64` is the type the default
//! tolerances are calibrated for; `f32` is suitable for short windows only.

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + core::ops::AddAssign
    + core::ops::SubAssign
    + core::ops::MulAssign
    + core::iter::Sum<Self>
    + core::fmt::Debug
    + core::fmt::Display
    + core::fmt::LowerExp
    + serde::Serialize
    + serde::de::DeserializeOwned
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Convert an `f64` constant into the working scalar type.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must convert to the scalar type")
}
