//! One trigonometric or hyperbolic Jacobi rotation of a column pair.
//!
//! For a pivot Gram block `[[a_ii, a_ij], [a_ij, a_jj]]` the columns are
//! updated as `g_i' = (g_i + hyp t g_j) c`, `g_j' = (t g_i + g_j) c`, with
//! `hyp = -1` (trigonometric, `t = tan phi`) or `hyp = +1` (hyperbolic,
//! `t = tanh phi`). Requiring `a_ij' = 0` gives
//!
//! * trigonometric: `a_ij (1 - t^2) + t (a_ii - a_jj) = 0`, i.e.
//!   `cot 2phi = (a_jj - a_ii) / (2 a_ij)`;
//! * hyperbolic: `a_ij (1 + t^2) + t (a_ii + a_jj) = 0`, i.e.
//!   `tanh 2phi = -2 a_ij / (a_ii + a_jj)`.

use crate::error::{HsvdError, Result};
use crate::scalar::Real;

/// The 2x2 pivot block of the implicit Gram matrix `G^T G`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PivotGram<T> {
    pub a_ii: T,
    pub a_jj: T,
    pub a_ij: T,
}

impl<T: Real> PivotGram<T> {
    pub fn new(a_ii: T, a_jj: T, a_ij: T) -> Self {
        Self { a_ii, a_jj, a_ij }
    }

    pub fn is_valid(&self) -> bool {
        self.a_ii > T::zero() && self.a_jj > T::zero() && self.a_ij.is_finite()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RotationKind {
    Trigonometric,
    Hyperbolic,
}

impl RotationKind {
    /// Equal signs in `J` call for a trigonometric rotation, opposite signs
    /// for a hyperbolic one.
    pub fn for_signs(si: i8, sj: i8) -> Self {
        if si == sj {
            Self::Trigonometric
        } else {
            Self::Hyperbolic
        }
    }

    pub fn hyp(self) -> i8 {
        match self {
            Self::Trigonometric => -1,
            Self::Hyperbolic => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation<T> {
    pub kind: RotationKind,
    /// `tan phi` or `tanh phi`.
    pub t: T,
    /// `cos phi` or `cosh phi`.
    pub c: T,
    pub skipped: bool,
}

impl<T: Real> Rotation<T> {
    pub fn identity(kind: RotationKind) -> Self {
        Self {
            kind,
            t: T::zero(),
            c: T::one(),
            skipped: true,
        }
    }

    pub fn hyp(&self) -> i8 {
        self.kind.hyp()
    }
}

/// `|a_ij| < eps sqrt(a_ii a_jj)`.
pub fn relatively_orthogonal<T: Real>(g: &PivotGram<T>, eps: T) -> bool {
    g.a_ij.abs() < eps * (g.a_ii.sqrt() * g.a_jj.sqrt())
}

/// Rotation that annihilates `a_ij`.
///
/// An exactly zero `a_ij` yields the skipped identity. A hyperbolic block with
/// `|tanh 2phi| >= 1` means `(A, J)` is not definite and is reported as
/// [`HsvdError::DefinitenessLost`] (block context left at zero).
pub fn compute_rotation<T: Real>(g: &PivotGram<T>, kind: RotationKind) -> Result<Rotation<T>> {
    if g.a_ij == T::zero() {
        return Ok(Rotation::identity(kind));
    }
    let one = T::one();
    let (t, c) = match kind {
        RotationKind::Trigonometric => {
            let zeta = (g.a_jj - g.a_ii) / (T::two() * g.a_ij);
            let sign = if zeta < T::zero() { -one } else { one };
            let t = sign / (zeta.abs() + one.hypot(zeta));
            (t, one / one.hypot(t))
        }
        RotationKind::Hyperbolic => {
            let theta = -T::two() * g.a_ij / (g.a_ii + g.a_jj);
            if !(theta.abs() < one) {
                return Err(HsvdError::DefinitenessLost {
                    block: 0,
                    i: 0,
                    j: 0,
                    theta: theta.abs().to_f64().unwrap_or(f64::NAN),
                });
            }
            // 1 - |theta| from the data: the sum is split error-free and the
            // subtraction of |2 a_ij| is exact whenever it cancels
            let sum = g.a_ii + g.a_jj;
            let bb = sum - g.a_ii;
            let sum_err = (g.a_ii - (sum - bb)) + (g.a_jj - bb);
            let gap = ((sum - T::two() * g.a_ij.abs()) + sum_err) / sum;
            if !(gap > T::zero()) {
                return Err(HsvdError::DefinitenessLost {
                    block: 0,
                    i: 0,
                    j: 0,
                    theta: theta.abs().to_f64().unwrap_or(f64::NAN),
                });
            }
            let s = (gap * (one + theta.abs())).sqrt();
            let t = theta / (one + s);
            // 1 - t^2 = 2 s / (1 + s)
            (t, ((one + s) / (T::two() * s)).sqrt())
        }
    };
    Ok(Rotation {
        kind,
        t,
        c,
        skipped: false,
    })
}

/// Updated diagonal `(a_ii + hyp t a_ij, a_jj + t a_ij)` predicted in exact
/// arithmetic. The solver recomputes norms instead; this is a cross-check.
pub fn diagonal_update_predicted<T: Real>(g: &PivotGram<T>, rot: &Rotation<T>) -> (T, T) {
    let ta = rot.t * g.a_ij;
    let hta = if rot.hyp() < 0 { -ta } else { ta };
    (g.a_ii + hta, g.a_jj + ta)
}

/// Two-bit per-block convergence status.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ConvergenceCode(u8);

impl ConvergenceCode {
    /// `00`: no rotation applied.
    pub const ORTHOGONAL: Self = Self(0b00);
    /// `01`: only rotations with `|t| <= Teps`.
    pub const QUADRATIC: Self = Self(0b01);
    /// `11`: at least one rotation with `|t| > Teps`.
    pub const ACTIVE: Self = Self(0b11);

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn from_bits(bits: u8) -> Option<Self> {
        match bits {
            0b00 | 0b01 | 0b11 => Some(Self(bits)),
            _ => None,
        }
    }

    pub fn or(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    /// Status after one more pivot of this block.
    pub fn update<T: Real>(self, rotated: bool, t: T, teps: T) -> Self {
        if !rotated {
            self
        } else if t.abs() > teps {
            Self::ACTIVE
        } else {
            self.or(Self::QUADRATIC)
        }
    }
}
