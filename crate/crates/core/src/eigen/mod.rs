//! Dense QZ and sparse shift-invert eigensolvers for linear pencils.

mod qz;
mod shift_invert;
mod solution;

pub use qz::{solve_dense_qz, QzOptions};
pub use shift_invert::{solve_shift_invert, ShiftInvertOptions};
pub use solution::{relative_residual, spectral_residuals, EigenPair, EigenSolution, PairFlag};
