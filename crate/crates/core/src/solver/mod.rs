//! One-sided hyperbolic Jacobi driver.
//!
//! The factor `G` (n x r) is orthogonalized from the right by trigonometric
//! and hyperbolic plane rotations until its columns are numerically
//! orthogonal. On exit `G` holds `U Sigma`; the squared column norms carry the
//! signs of `J` to give the eigenvalues of `M = G J G^T`. Columns are never
//! swapped: the sorted diagonal addresses them through its permutation.

mod border;
mod package;
mod step;

pub use border::{border, Bordered, BorderStrip};
pub use package::{precompute, sort_diagonal, DiagonalPackage, DiagonalPackageVector};
pub use step::{jacobi_step, rotate_pairs, StepStats, Workers};

use crate::error::{HsvdError, Result};
use crate::linalg::{DenseMatrix, SignatureVector, DEFAULT_CHUNK};
use crate::rotation::ConvergenceCode;
use crate::scalar::Real;
use crate::strategy::{enumerate_row_cyclic, StepperState};

/// Default quasi-sweep budget.
pub const DEFAULT_MAX_SWEEPS: usize = 30;

/// Order in which pivot pairs are visited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    /// `r` steps of `r / 2` disjoint pairs per quasi-sweep.
    #[default]
    ModifiedModulus,
    /// Sequential reference: one pair per step, row by row.
    RowCyclic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig<T> {
    pub max_sweeps: usize,
    pub eps: T,
    pub teps: T,
    /// Accumulate `V^{-T}`.
    pub accumulate_v: bool,
    /// Skip pairs that are already relatively orthogonal.
    pub use_rel_orth_skip: bool,
    pub chunk: usize,
    /// Sort the diagonal before the first and after every quasi-sweep.
    pub sort: bool,
    pub workers: usize,
    pub schedule: Schedule,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            max_sweeps: DEFAULT_MAX_SWEEPS,
            eps: T::eps(),
            teps: T::teps(),
            accumulate_v: true,
            use_rel_orth_skip: true,
            chunk: DEFAULT_CHUNK,
            sort: true,
            workers: 1,
            schedule: Schedule::ModifiedModulus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// A full quasi-sweep without rotations.
    Orthogonal,
    /// A quasi-sweep whose tangents all stayed below `Teps`.
    Quadratic,
    MaxSweeps,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Orthogonal => "orthogonal",
            Self::Quadratic => "quadratic",
            Self::MaxSweeps => "max_sweeps",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convergence {
    StopOrthogonal,
    StopQuadratic,
    Continue,
}

/// Bitwise-or reduction of the per-block codes of a quasi-sweep.
pub fn check_convergence(codes: &[ConvergenceCode]) -> Convergence {
    let all = codes
        .iter()
        .fold(ConvergenceCode::ORTHOGONAL, |acc, &c| acc.or(c));
    match all {
        ConvergenceCode::ORTHOGONAL => Convergence::StopOrthogonal,
        ConvergenceCode::QUADRATIC => Convergence::StopQuadratic,
        other => {
            debug_assert_eq!(other, ConvergenceCode::ACTIVE, "code 10 is unreachable");
            Convergence::Continue
        }
    }
}

/// Per-quasi-sweep telemetry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepStats<T> {
    pub sweep: usize,
    pub rotations: usize,
    pub skips: usize,
    pub max_abs_t: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HsvdResult<T> {
    /// Hyperbolic singular values, original column order.
    pub sigma: Vec<T>,
    /// Left singular vectors (eigenvectors of `G J G^T`), n x r.
    pub u: DenseMatrix<T>,
    /// Accumulated `V^{-T}`, r x r, when requested.
    pub vinv_t: Option<DenseMatrix<T>>,
    /// Eigenvalues `sigma_i^2 j_i`, original column order.
    pub lambda: Vec<T>,
    /// Sign of each original column.
    pub signs: Vec<i8>,
    pub sweeps_used: usize,
    pub stop_reason: StopReason,
    pub telemetry: Vec<SweepStats<T>>,
}

impl<T: Real> HsvdResult<T> {
    pub fn rotations(&self) -> usize {
        self.telemetry.iter().map(|s| s.rotations).sum()
    }

    pub fn skips(&self) -> usize {
        self.telemetry.iter().map(|s| s.skips).sum()
    }

    pub fn converged(&self) -> bool {
        self.stop_reason != StopReason::MaxSweeps
    }

    /// Eigenvalues in ascending order.
    pub fn sorted_lambda(&self) -> Vec<T> {
        let mut l = self.lambda.clone();
        l.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        l
    }
}

/// State visible at a quasi-sweep boundary, after sorting.
pub struct SweepSnapshot<'a, T> {
    pub sweep: usize,
    pub g: &'a DenseMatrix<T>,
    pub vinv_t: Option<&'a DenseMatrix<T>>,
    pub diagonal: &'a DiagonalPackageVector<T>,
}

/// Full HSVD of `g` with signature `j`.
pub fn drive<T: Real>(
    g: &DenseMatrix<T>,
    j: &SignatureVector,
    cfg: &SolverConfig<T>,
) -> Result<HsvdResult<T>> {
    drive_observed(g, j, cfg, |_| {})
}

/// [`drive`] with a callback at every quasi-sweep boundary.
pub fn drive_observed<T: Real>(
    g0: &DenseMatrix<T>,
    j: &SignatureVector,
    cfg: &SolverConfig<T>,
    mut observe: impl FnMut(SweepSnapshot<'_, T>),
) -> Result<HsvdResult<T>> {
    let (n, r) = (g0.rows(), g0.cols());
    if j.len() != r {
        return Err(HsvdError::shape(format!(
            "signature of length {} for {r} columns",
            j.len()
        )));
    }
    if r == 0 || n < r {
        return Err(HsvdError::shape(format!(
            "factor must have 1 <= r <= n, got {n}x{r}"
        )));
    }
    if cfg.schedule == Schedule::ModifiedModulus && r % 2 != 0 {
        return Err(HsvdError::shape(format!(
            "modified modulus schedule needs an even column count, got {r}; border first"
        )));
    }
    if !g0.is_finite() {
        return Err(HsvdError::Domain("factor contains non-finite values".into()));
    }

    let workers = Workers::new(cfg.workers)?;
    let mut g = g0.clone();
    let mut v = cfg.accumulate_v.then(|| DenseMatrix::identity(r));
    let mut d = DiagonalPackageVector::precompute(&g, j, cfg.chunk)?;
    if cfg.sort {
        d.sort();
    }

    let row_cyclic: Vec<(usize, usize)> = match cfg.schedule {
        Schedule::RowCyclic => enumerate_row_cyclic(r).linearize(),
        Schedule::ModifiedModulus => Vec::new(),
    };
    let mut stepper = match cfg.schedule {
        Schedule::ModifiedModulus => Some(StepperState::new(r)?),
        Schedule::RowCyclic => None,
    };
    let blocks = stepper.as_ref().map_or(1, StepperState::block_count);
    let mut codes = vec![ConvergenceCode::ORTHOGONAL; blocks];

    let mut telemetry = Vec::new();
    let mut stop_reason = StopReason::MaxSweeps;
    for sweep in 0..cfg.max_sweeps {
        codes.fill(ConvergenceCode::ORTHOGONAL);
        let mut stats = StepStats {
            rotations: 0,
            skips: 0,
            max_abs_t: T::zero(),
        };
        match stepper.as_mut() {
            Some(stepper) => {
                for _ in 0..r {
                    let s = jacobi_step(
                        &mut g,
                        v.as_mut(),
                        &mut d,
                        stepper,
                        &mut codes,
                        cfg,
                        &workers,
                    )?;
                    stats.merge(&s);
                }
            }
            None => {
                for pair in &row_cyclic {
                    let s = rotate_pairs(
                        &mut g,
                        v.as_mut(),
                        &mut d,
                        std::slice::from_ref(pair),
                        &mut codes,
                        cfg,
                        &workers,
                    )?;
                    stats.merge(&s);
                }
            }
        }
        telemetry.push(SweepStats {
            sweep,
            rotations: stats.rotations,
            skips: stats.skips,
            max_abs_t: stats.max_abs_t,
        });
        let verdict = check_convergence(&codes);
        if cfg.sort {
            d.sort();
        }
        observe(SweepSnapshot {
            sweep,
            g: &g,
            vinv_t: v.as_ref(),
            diagonal: &d,
        });
        match verdict {
            Convergence::StopOrthogonal => {
                stop_reason = StopReason::Orthogonal;
                break;
            }
            Convergence::StopQuadratic => {
                stop_reason = StopReason::Quadratic;
                break;
            }
            Convergence::Continue => {}
        }
    }

    Ok(extract(g, v, &d, telemetry, stop_reason))
}

fn extract<T: Real>(
    g: DenseMatrix<T>,
    vinv_t: Option<DenseMatrix<T>>,
    d: &DiagonalPackageVector<T>,
    telemetry: Vec<SweepStats<T>>,
    stop_reason: StopReason,
) -> HsvdResult<T> {
    let r = g.cols();
    let mut sigma = vec![T::zero(); r];
    let mut lambda = vec![T::zero(); r];
    let mut signs = vec![0i8; r];
    let mut u = g;
    for pk in d.packages() {
        let s = pk.d.sqrt();
        sigma[pk.rho] = s;
        lambda[pk.rho] = if pk.sign > 0 { pk.d } else { -pk.d };
        signs[pk.rho] = pk.sign;
        let inv = T::one() / s;
        u.col_mut(pk.rho).iter_mut().for_each(|x| *x = *x * inv);
    }
    HsvdResult {
        sigma,
        u,
        vinv_t,
        lambda,
        signs,
        sweeps_used: telemetry.len(),
        stop_reason,
        telemetry,
    }
}

/// `V = J V^{-T} J`.
pub fn recover_v<T: Real>(vinv_t: &DenseMatrix<T>, j: &SignatureVector) -> Result<DenseMatrix<T>> {
    let r = vinv_t.cols();
    if vinv_t.rows() != r || j.len() != r {
        return Err(HsvdError::shape("V^{-T} must be square and match the signature"));
    }
    let mut v = vinv_t.clone();
    for b in 0..r {
        for a in 0..r {
            if j.sign(a) != j.sign(b) {
                v[(a, b)] = -v[(a, b)];
            }
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotation::ConvergenceCode as C;

    #[test]
    fn convergence_reduction() {
        assert_eq!(
            check_convergence(&[C::ORTHOGONAL, C::ORTHOGONAL, C::ORTHOGONAL]),
            Convergence::StopOrthogonal
        );
        assert_eq!(
            check_convergence(&[C::QUADRATIC, C::ORTHOGONAL, C::QUADRATIC]),
            Convergence::StopQuadratic
        );
        assert_eq!(
            check_convergence(&[C::QUADRATIC, C::ACTIVE, C::ORTHOGONAL]),
            Convergence::Continue
        );
    }

    #[test]
    fn recover_v_trivial_cases() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(recover_v(&m, &SignatureVector::new(2, 2).unwrap()).unwrap(), m);
        let id = DenseMatrix::<f64>::identity(3);
        assert_eq!(recover_v(&id, &SignatureVector::new(3, 1).unwrap()).unwrap(), id);
        let flipped = recover_v(&m, &SignatureVector::new(2, 1).unwrap()).unwrap();
        assert_eq!(
            flipped,
            DenseMatrix::from_rows(&[vec![1.0, -2.0], vec![-3.0, 4.0]]).unwrap()
        );
    }

    #[test]
    fn drive_rejects_bad_shapes() {
        let cfg = SolverConfig::<f64>::default();
        let g = DenseMatrix::<f64>::identity(3);
        assert!(matches!(
            drive(&g, &SignatureVector::new(3, 1).unwrap(), &cfg),
            Err(HsvdError::Shape(_))
        ));
        let tall = DenseMatrix::<f64>::zeros(2, 4);
        assert!(drive(&tall, &SignatureVector::new(4, 1).unwrap(), &cfg).is_err());
        assert!(drive(
            &DenseMatrix::<f64>::identity(2),
            &SignatureVector::new(3, 1).unwrap(),
            &cfg
        )
        .is_err());
    }
}
