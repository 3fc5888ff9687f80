//! Double-word arithmetic built from error-free transformations.
//!
//! A [`TwoFold`] value is the unevaluated sum `hi + lo` with
//! `|lo| <= ulp(hi) / 2`, giving roughly twice the working precision. Used by
//! the test-matrix factory so that its own rounding stays far below the error
//! of the solver under test.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Float;

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TwoFold<T> {
    pub hi: T,
    pub lo: T,
}

/// `a + b = s + e` exactly.
#[inline]
pub fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn fast_two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    (s, b - (s - a))
}

/// `a * b = p + e` exactly (barring underflow).
#[inline]
pub fn two_prod<T: Real>(a: T, b: T) -> (T, T) {
    let p = a * b;
    (p, Float::mul_add(a, b, -p))
}

impl<T: Real> TwoFold<T> {
    pub fn new(x: T) -> Self {
        Self {
            hi: x,
            lo: T::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::new(T::zero())
    }

    pub fn one() -> Self {
        Self::new(T::one())
    }

    /// Rounded to working precision.
    pub fn value(self) -> T {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < T::zero() {
            -self
        } else {
            self
        }
    }

    pub fn is_zero(self) -> bool {
        self.hi == T::zero()
    }

    pub fn signum(self) -> T {
        if self.hi < T::zero() {
            -T::one()
        } else {
            T::one()
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= T::zero() {
            return Self::zero();
        }
        let s = self.hi.sqrt();
        let (p, e) = two_prod(s, s);
        let r = ((self.hi - p) - e + self.lo) / (s + s);
        let (hi, lo) = fast_two_sum(s, r);
        Self { hi, lo }
    }

    pub fn mul_scalar(self, b: T) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = fast_two_sum(p, Float::mul_add(self.lo, b, e));
        Self { hi, lo }
    }

    /// `self + a * b` with `a * b` formed exactly.
    pub fn add_prod(self, a: Self, b: Self) -> Self {
        self + a * b
    }
}

impl<T: Real> From<T> for TwoFold<T> {
    fn from(x: T) -> Self {
        Self::new(x)
    }
}

impl<T: Real> Neg for TwoFold<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl<T: Real> Add for TwoFold<T> {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = fast_two_sum(s, e + t);
        let (hi, lo) = fast_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl<T: Real> Sub for TwoFold<T> {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl<T: Real> Mul for TwoFold<T> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = fast_two_sum(p, e);
        Self { hi, lo }
    }
}

impl<T: Real> Div for TwoFold<T> {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_scalar(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_scalar(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = fast_two_sum(q1, q2);
        Self { hi, lo } + Self::new(q3)
    }
}
