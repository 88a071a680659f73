use std::fmt;

use serde::{Serialize, Serializer};

use crate::scalar::Real;
use crate::tolerance;

/// Non-negative real extended with `+∞`.
///
/// Used for divergences (infinite without absolute continuity) and for the
/// bound `f`, which is infinite at zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtendedReal<T> {
    Finite(T),
    Infinite,
}

/// Value of the bound function `f`.
pub type BoundValue<T> = ExtendedReal<T>;

impl<T: Real> ExtendedReal<T> {
    /// Wraps a finite value, clamping roundoff negatives in `[-1e-10, 0)` to
    /// zero. Larger negatives are kept so callers can detect them.
    pub fn finite(value: T) -> Self {
        if value < T::zero() && value >= -T::tol(tolerance::DIVERGENCE_CLAMP) {
            Self::Finite(T::zero())
        } else {
            Self::Finite(value)
        }
    }

    pub fn zero() -> Self {
        Self::Finite(T::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    /// The finite value, if any.
    pub fn value(&self) -> Option<T> {
        match *self {
            Self::Finite(v) => Some(v),
            Self::Infinite => None,
        }
    }

    /// The value as a scalar, mapping `+∞` to `T::infinity()`.
    pub fn to_scalar(&self) -> T {
        self.value().unwrap_or_else(T::infinity)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_scalar().as_f64()
    }

    /// Arithmetic mean of two extended values.
    pub fn mean(a: Self, b: Self) -> Self {
        match (a, b) {
            (Self::Finite(x), Self::Finite(y)) => Self::Finite((x + y) * T::lit(0.5)),
            _ => Self::Infinite,
        }
    }

    pub fn add(self, other: Self) -> Self {
        match (self, other) {
            (Self::Finite(x), Self::Finite(y)) => Self::Finite(x + y),
            _ => Self::Infinite,
        }
    }

    /// `self ≤ other + slack`, with `∞ ≤ ∞`.
    pub fn le_with_slack(&self, other: &Self, slack: T) -> bool {
        match (*self, *other) {
            (_, Self::Infinite) => true,
            (Self::Infinite, Self::Finite(_)) => false,
            (Self::Finite(x), Self::Finite(y)) => x <= y + slack,
        }
    }

    /// Absolute difference; zero when both are infinite, `+∞` when exactly one is.
    pub fn abs_diff(&self, other: &Self) -> T {
        match (*self, *other) {
            (Self::Finite(x), Self::Finite(y)) => (x - y).abs(),
            (Self::Infinite, Self::Infinite) => T::zero(),
            _ => T::infinity(),
        }
    }
}

impl<T: Real> fmt::Display for ExtendedReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(v) => fmt::Display::fmt(v, f),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

/// Serializes finite values as numbers and `+∞` as `null`.
impl<T: Real> Serialize for ExtendedReal<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Finite(v) => v.serialize(s),
            Self::Infinite => s.serialize_none(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_only_roundoff_negatives() {
        assert_eq!(ExtendedReal::finite(-5e-11), ExtendedReal::Finite(0.0));
        assert_eq!(ExtendedReal::finite(-1e-6), ExtendedReal::Finite(-1e-6));
    }

    #[test]
    fn mean_propagates_infinity() {
        let a = ExtendedReal::Finite(1.0);
        assert_eq!(ExtendedReal::mean(a, ExtendedReal::Finite(3.0)), ExtendedReal::Finite(2.0));
        assert_eq!(ExtendedReal::mean(a, ExtendedReal::Infinite), ExtendedReal::Infinite);
    }

    #[test]
    fn ordering_with_infinity() {
        let inf = ExtendedReal::<f64>::Infinite;
        let one = ExtendedReal::Finite(1.0);
        assert!(one.le_with_slack(&inf, 0.0));
        assert!(inf.le_with_slack(&inf, 0.0));
        assert!(!inf.le_with_slack(&one, 0.0));
        assert_eq!(inf.to_f64(), f64::INFINITY);
    }
}
