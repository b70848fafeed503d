//! Special functions and dense complex linear algebra shared by the solvers.

mod bessel;
mod linalg;
mod quadrature;

pub use bessel::bessel_j0;
pub(crate) use bessel::j0;
pub use linalg::{
    determinant, norm_inf, solve_dense, solve_identity_plus, ComplexMatrix, LinearSystem, ScaledDeterminant, SolveReport,
};
pub use quadrature::{band_integral, band_integral_check};

/// Relative pivot threshold below which a matrix is declared singular.
pub const PIVOT_THRESHOLD: f64 = 1e-14;
