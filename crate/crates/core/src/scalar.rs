//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Binary floating-point scalar the solver is generic over (`f32` or `f64`).
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// `a * b + c`, with a single rounding when the target has a hardware FMA.
    ///
    /// Without hardware support this falls back to two roundings; use
    /// [`Float::mul_add`] directly where exactness is required.
    fn fma(a: Self, b: Self, c: Self) -> Self;

    /// Machine epsilon: the spacing of floats just above one.
    fn eps() -> Self {
        Self::epsilon()
    }

    /// Tangent threshold signalling quadratic convergence, `sqrt(eps) / 2`.
    fn teps() -> Self {
        Self::eps().sqrt() / Self::two()
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }

    /// Lossy conversion from `f64`; panics only for types unable to hold any `f64`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("scalar conversion from f64")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("scalar conversion from usize")
    }
}

impl Real for f32 {
    #[inline(always)]
    fn fma(a: Self, b: Self, c: Self) -> Self {
        if cfg!(target_feature = "fma") {
            a.mul_add(b, c)
        } else {
            a * b + c
        }
    }
}

impl Real for f64 {
    #[inline(always)]
    fn fma(a: Self, b: Self, c: Self) -> Self {
        if cfg!(target_feature = "fma") {
            a.mul_add(b, c)
        } else {
            a * b + c
        }
    }
}
