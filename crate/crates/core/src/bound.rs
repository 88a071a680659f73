//! Scalar bound machinery.
//!
//! * `h(x) = x tanh(x/2)`, strictly increasing on `[0, ∞)`;
//! * `g = h⁻¹`;
//! * `f(x) = 1 / sinh²(g(x)/2)`, strictly decreasing, `f(0) = ∞`, `f(∞) = 0`;
//! * `B = f⁻¹`, `B(x) = 2 (1+x)^{-1/2} artanh((1+x)^{-1/2})`.
//!
//! `f` lower-bounds the uncertainty, `B` lower-bounds the symmetric relative
//! entropy given an uncertainty.

use crate::error::{Error, Result};
use crate::extended::{BoundValue, ExtendedReal};
use crate::scalar::Real;
use crate::tolerance;

const MAX_BISECTIONS: usize = 4096;

fn non_negative<T: Real>(x: T) -> Result<()> {
    if x >= T::zero() {
        Ok(())
    } else {
        Err(Error::NegativeInput { value: x.as_f64() })
    }
}

/// `h(x) = x tanh(x/2)`.
pub fn h<T: Real>(x: T) -> Result<T> {
    non_negative(x)?;
    Ok(x * (x * T::lit(0.5)).tanh())
}

/// Inverse of [`h`].
///
/// Bisection on `[0, y + 2]` (valid since `h(x) ≥ x - 2`) down to a relative
/// bracket width of `1e-14`, followed by one secant step between the bracket
/// ends.
pub fn g<T: Real>(y: T) -> Result<T> {
    non_negative(y)?;
    if y == T::zero() {
        return Ok(T::zero());
    }
    if y.is_infinite() {
        return Ok(T::infinity());
    }
    let hx = |x: T| x * (x * T::lit(0.5)).tanh();
    let width = T::tol(tolerance::ROOT_WIDTH);
    let mut lo = T::zero();
    let mut hi = y + T::lit(2.0);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= width * hi {
            break;
        }
        let mid = lo + (hi - lo) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if hx(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (h_lo, h_hi) = (hx(lo), hx(hi));
    if h_hi == h_lo {
        return Ok(lo + (hi - lo) * T::lit(0.5));
    }
    let x = lo + (y - h_lo) * (hi - lo) / (h_hi - h_lo);
    Ok(x.max(lo).min(hi))
}

/// `1 / sinh²(x/2)` evaluated directly at the argument of `g`.
fn inverse_sinh_squared_half<T: Real>(x: T) -> ExtendedReal<T> {
    let s = (x * T::lit(0.5)).sinh();
    if s == T::zero() {
        ExtendedReal::Infinite
    } else {
        ExtendedReal::Finite(T::one() / (s * s))
    }
}

/// `f(x) = 1 / sinh²(g(x)/2)` on the extended half-line.
///
/// Returns `+∞` for `x ≤ 1e-300` and `0` for `x = +∞`.
pub fn f<T: Real>(x: ExtendedReal<T>) -> Result<BoundValue<T>> {
    match x {
        ExtendedReal::Infinite => Ok(ExtendedReal::Finite(T::zero())),
        ExtendedReal::Finite(v) => {
            non_negative(v)?;
            if v <= T::lit(tolerance::BOUND_ZERO) {
                return Ok(ExtendedReal::Infinite);
            }
            if v.is_infinite() {
                return Ok(ExtendedReal::Finite(T::zero()));
            }
            Ok(inverse_sinh_squared_half(g(v)?))
        }
    }
}

/// Convenience for finite arguments.
pub fn f_of<T: Real>(x: T) -> Result<BoundValue<T>> {
    f(ExtendedReal::Finite(x))
}

/// `f(h(ε)) = 1/sinh²(ε/2)`, the value reached by the saturating family.
pub fn saturation_value<T: Real>(epsilon: T) -> Result<BoundValue<T>> {
    non_negative(epsilon)?;
    Ok(inverse_sinh_squared_half(epsilon))
}

fn positive<T: Real>(x: T) -> Result<()> {
    if x > T::zero() {
        Ok(())
    } else {
        Err(Error::NonPositiveInput { value: x.as_f64() })
    }
}

/// `B(x) = 2 (1+x)^{-1/2} artanh((1+x)^{-1/2})`, the inverse of `f` on `(0, ∞)`.
///
/// Evaluated as `ln((s+1)²/x) / s` with `s = √(1+x)`, which avoids the
/// cancellation in `artanh` near one for small `x`.
pub fn big_b<T: Real>(x: T) -> Result<T> {
    positive(x)?;
    let s = (T::one() + x).sqrt();
    let t = s + T::one();
    Ok((t * t / x).ln() / s)
}

/// The logarithmic form `(1+x)^{-1/2} ln[(√(x+1)+1)/(√(x+1)-1)]` of [`big_b`].
pub fn big_b_log_form<T: Real>(x: T) -> Result<T> {
    positive(x)?;
    let s = (x + T::one()).sqrt();
    Ok(((s + T::one()) / (s - T::one())).ln() / s)
}
