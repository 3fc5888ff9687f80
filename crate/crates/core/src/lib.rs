//! Hyperbolic singular value decomposition by the one-sided blocked-parallel
//! Jacobi method, and the symmetric indefinite eigensolver built on it.
//!
//! Given `G` (n x r, full column rank) and a signature `J = diag(+-1)` with
//! the positive signs first, [`drive`] computes `G = U Sigma V^T` with
//! `V^T J V = J`. The eigenvalues of `M = G J G^T` are `sigma_i^2 j_i` with
//! eigenvectors `U`.
//!
//! ```
//! use hsvd::{drive, Matrix, SignatureVector, SolverConfig};
//!
//! let g = Matrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]]).unwrap();
//! let j = SignatureVector::new(2, 1).unwrap();
//! let res = drive(&g, &j, &SolverConfig::default()).unwrap();
//! let l = res.sorted_lambda();
//! assert!((l[0] - (1.0 - 5f64.sqrt())).abs() < 1e-14);
//! assert!((l[1] - (1.0 + 5f64.sqrt())).abs() < 1e-14);
//! ```
//!
//! Everything numerical is generic over [`Real`] (`f32`, `f64`); the aliases
//! below fix the usual double-precision instantiation.

pub mod error;
pub mod factory;
pub mod io;
pub mod linalg;
pub mod rotation;
pub mod scalar;
pub mod solver;
pub mod strategy;

pub use error::{HsvdError, Result};
pub use factory::{
    bunch_parlett_factor, generate_instance, generate_symmetric, qr_shorten, FactorPair,
    SpectrumSpec, TestInstance,
};
pub use linalg::{dot_chunked, fused_pair_update, orthonormality_distance, DenseMatrix, SignatureVector};
pub use rotation::{compute_rotation, ConvergenceCode, PivotGram, Rotation, RotationKind};
pub use scalar::Real;
pub use solver::{
    border, drive, drive_observed, recover_v, HsvdResult, Schedule, SolverConfig, StopReason,
};
pub use strategy::{PivotOrdering, StepperState};

pub type Matrix = DenseMatrix<f64>;
pub type Matrix32 = DenseMatrix<f32>;
pub type HsvdResult64 = HsvdResult<f64>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type FactorPair64 = FactorPair<f64>;
