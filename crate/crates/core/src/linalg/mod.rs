//! Numerical substrate: dense complex matrices, SVD, Haar sampling.

mod haar;
mod mat2;
mod matrix;
mod svd;

pub use haar::haar_random_unitary;
pub use mat2::Mat2;
pub use matrix::{frobenius_distance, ComplexMatrix, UnitaryMatrix, DEFAULT_UNITARITY_TOL};
pub use svd::{svd, SvdResult};

pub(crate) use svd::fill_orthonormal;
