//! Scalar abstraction shared by every geometric and cost computation.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the matcher is generic over. Implemented for `f32`
/// and `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Never fails for `f32`/`f64`.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Tolerance used for coincidence tests at this precision.
    fn coincidence_eps() -> Self;
}

impl Real for f32 {
    fn coincidence_eps() -> Self {
        1e-5
    }
}

impl Real for f64 {
    fn coincidence_eps() -> Self {
        1e-9
    }
}

/// Converts degrees to radians.
#[inline]
pub fn to_radians<T: Real>(deg: T) -> T {
    deg * T::PI() / T::lit(180.0)
}

/// Converts radians to degrees.
#[inline]
pub fn to_degrees<T: Real>(rad: T) -> T {
    rad * T::lit(180.0) / T::PI()
}

/// Wraps an angle in degrees to `(-180, 180]`.
pub fn wrap_degrees<T: Real>(deg: T) -> T {
    let full = T::lit(360.0);
    let half = T::lit(180.0);
    let mut d = deg % full;
    if d > half {
        d -= full;
    } else if d <= -half {
        d += full;
    }
    d
}
