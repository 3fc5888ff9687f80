//! Test-matrix factory: random spectrum, symmetric matrix with that
//! spectrum, and a `G J G^T` factorization of it.

mod bunch_parlett;
mod generate;
mod qr;
pub mod twofold;

pub use bunch_parlett::{bunch_parlett_factor, pivot_alpha, FactorPair};
pub use generate::{
    generate_instance, generate_spectrum, generate_symmetric, random_reflectors,
    symmetric_from_spectrum, table_scale, SpectrumSpec, TestInstance, TwoFoldSymmetric,
    SPECTRUM_GAP,
};
pub use qr::qr_shorten;
