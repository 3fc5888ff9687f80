use rayon::prelude::*;

use super::package::DiagonalPackageVector;
use super::SolverConfig;
use crate::error::{HsvdError, Result};
use crate::linalg::{apply_pair, dot_lanes, DenseMatrix};
use crate::rotation::{
    compute_rotation, relatively_orthogonal, ConvergenceCode, PivotGram, RotationKind,
};
use crate::scalar::Real;
use crate::strategy::StepperState;

/// Worker pool for the blocks of a step. One worker runs the blocks inline.
pub struct Workers {
    pool: Option<rayon::ThreadPool>,
}

impl Workers {
    pub fn new(count: usize) -> Result<Self> {
        if count <= 1 {
            return Ok(Self { pool: None });
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(count)
            .build()
            .map_err(|e| HsvdError::Domain(format!("cannot start {count} workers: {e}")))?;
        Ok(Self { pool: Some(pool) })
    }

    pub fn sequential() -> Self {
        Self { pool: None }
    }

    pub fn count(&self) -> usize {
        self.pool.as_ref().map_or(1, |p| p.current_num_threads())
    }
}

/// Counters for one step (or, summed, one quasi-sweep).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StepStats<T> {
    pub rotations: usize,
    pub skips: usize,
    pub max_abs_t: T,
}

impl<T: Real> StepStats<T> {
    pub fn merge(&mut self, other: &Self) {
        self.rotations += other.rotations;
        self.skips += other.skips;
        if other.max_abs_t > self.max_abs_t {
            self.max_abs_t = other.max_abs_t;
        }
    }
}

struct PairOutcome<T> {
    rotated: bool,
    t: T,
    d_i: T,
    d_j: T,
}

struct PairJob<'a, T> {
    gi: &'a mut [T],
    gj: &'a mut [T],
    v: Option<(&'a mut [T], &'a mut [T])>,
    a_ii: T,
    a_jj: T,
    kind: RotationKind,
}

impl<T: Real> PairJob<'_, T> {
    fn run(self, cfg: &SolverConfig<T>) -> Result<PairOutcome<T>> {
        let a_ij = dot_lanes(self.gi, self.gj, cfg.chunk);
        let gram = PivotGram::new(self.a_ii, self.a_jj, a_ij);
        let unchanged = PairOutcome {
            rotated: false,
            t: T::zero(),
            d_i: self.a_ii,
            d_j: self.a_jj,
        };
        if cfg.use_rel_orth_skip && relatively_orthogonal(&gram, cfg.eps) {
            return Ok(unchanged);
        }
        let rot = compute_rotation(&gram, self.kind)?;
        if rot.skipped {
            return Ok(unchanged);
        }
        let s = rot.hyp();
        apply_pair(self.gi, self.gj, rot.t, rot.c, s);
        let d_i = dot_lanes(self.gi, self.gi, cfg.chunk);
        let d_j = dot_lanes(self.gj, self.gj, cfg.chunk);
        if let Some((vi, vj)) = self.v {
            apply_pair(vi, vj, rot.t, rot.c, s);
        }
        Ok(PairOutcome {
            rotated: true,
            t: rot.t,
            d_i,
            d_j,
        })
    }
}

fn take<'a, T>(cols: &mut [Option<&'a mut [T]>], c: usize) -> &'a mut [T] {
    cols[c].take().expect("pairs of a step must be disjoint")
}

/// Orthogonalizes every pair of one step. `pairs[k]` holds sorted-diagonal
/// positions `(i, j)`, `i < j`, and is processed as block `k`; `codes[k]` is
/// updated from its tangent. Pairs must be mutually disjoint.
pub fn rotate_pairs<T: Real>(
    g: &mut DenseMatrix<T>,
    mut vinv_t: Option<&mut DenseMatrix<T>>,
    d: &mut DiagonalPackageVector<T>,
    pairs: &[(usize, usize)],
    codes: &mut [ConvergenceCode],
    cfg: &SolverConfig<T>,
    workers: &Workers,
) -> Result<StepStats<T>> {
    assert_eq!(pairs.len(), codes.len(), "one convergence code per block");
    let outcomes: Vec<Result<PairOutcome<T>>> = match &workers.pool {
        Some(pool) if pairs.len() > 1 => {
            let mut gcols: Vec<Option<&mut [T]>> = g.columns_mut().into_iter().map(Some).collect();
            let mut vcols: Option<Vec<Option<&mut [T]>>> = vinv_t
                .as_deref_mut()
                .map(|v| v.columns_mut().into_iter().map(Some).collect());
            let jobs: Vec<PairJob<'_, T>> = pairs
                .iter()
                .map(|&(i, j)| {
                    let (pi, pj) = (d.get(i), d.get(j));
                    let gi = take(&mut gcols, pi.rho);
                    let gj = take(&mut gcols, pj.rho);
                    let v = vcols
                        .as_mut()
                        .map(|vc| (take(vc, pi.rho), take(vc, pj.rho)));
                    PairJob {
                        gi,
                        gj,
                        v,
                        a_ii: pi.d,
                        a_jj: pj.d,
                        kind: RotationKind::for_signs(pi.sign, pj.sign),
                    }
                })
                .collect();
            pool.install(|| jobs.into_par_iter().map(|job| job.run(cfg)).collect())
        }
        _ => pairs
            .iter()
            .map(|&(i, j)| {
                let (pi, pj) = (*d.get(i), *d.get(j));
                let (gi, gj) = g.col_pair_mut(pi.rho, pj.rho);
                let v = vinv_t.as_deref_mut().map(|v| v.col_pair_mut(pi.rho, pj.rho));
                PairJob {
                    gi,
                    gj,
                    v,
                    a_ii: pi.d,
                    a_jj: pj.d,
                    kind: RotationKind::for_signs(pi.sign, pj.sign),
                }
                .run(cfg)
            })
            .collect(),
    };

    let mut stats = StepStats {
        rotations: 0,
        skips: 0,
        max_abs_t: T::zero(),
    };
    for (k, (outcome, &(i, j))) in outcomes.into_iter().zip(pairs).enumerate() {
        let out = outcome.map_err(|e| match e {
            HsvdError::DefinitenessLost { theta, .. } => HsvdError::DefinitenessLost {
                block: k,
                i,
                j,
                theta,
            },
            other => other,
        })?;
        codes[k] = codes[k].update(out.rotated, out.t, cfg.teps);
        if out.rotated {
            stats.rotations += 1;
            d.set_d(i, out.d_i);
            d.set_d(j, out.d_j);
            if out.t.abs() > stats.max_abs_t {
                stats.max_abs_t = out.t.abs();
            }
        } else {
            stats.skips += 1;
        }
    }
    Ok(stats)
}

/// One step of the modified modulus strategy: every block orthogonalizes
/// its pair `(iblk, jblk)`, then every block advances its stepper.
pub fn jacobi_step<T: Real>(
    g: &mut DenseMatrix<T>,
    vinv_t: Option<&mut DenseMatrix<T>>,
    d: &mut DiagonalPackageVector<T>,
    stepper: &mut StepperState,
    codes: &mut [ConvergenceCode],
    cfg: &SolverConfig<T>,
    workers: &Workers,
) -> Result<StepStats<T>> {
    let pairs = stepper.pairs();
    let stats = rotate_pairs(g, vinv_t, d, &pairs, codes, cfg, workers)?;
    stepper.advance();
    Ok(stats)
}
