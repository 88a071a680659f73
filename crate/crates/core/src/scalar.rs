//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::Serialize;

/// Number of machine epsilons below which no tolerance is allowed to shrink.
const EPSILON_FLOOR: f64 = 64.0;

/// Real floating-point scalar: `f32` or `f64`.
///
/// All tolerances in the crate are written as `f64` literals calibrated for
/// double precision. [`Real::tol`] converts them and floors them at a small
/// multiple of the scalar's machine epsilon, so the same code stays meaningful
/// in single precision.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Serialize
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Converts an `f64` tolerance, floored at `64 * epsilon`.
    #[inline]
    fn tol(x: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(EPSILON_FLOOR);
        Self::lit(x).max(floor)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_tolerances_pass_through() {
        assert_eq!(<f64 as Real>::tol(1e-10), 1e-10);
        assert_eq!(<f64 as Real>::tol(1e-12), 1e-12);
    }

    #[test]
    fn f32_tolerances_are_floored() {
        let t = <f32 as Real>::tol(1e-12);
        assert!(t >= 64.0 * f32::EPSILON);
        assert_eq!(<f32 as Real>::tol(0.5), 0.5);
    }
}
