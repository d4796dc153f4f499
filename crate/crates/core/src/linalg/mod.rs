//! Sparse storage and thin wrappers over the dense/sparse kernels in `faer`.

pub mod dense;
pub mod factor;
pub mod sparse;

pub use dense::{herm_part, DMat};
pub use factor::SparseLu;
pub use sparse::{CsrMatrix, Triplets};

pub type C64 = num_complex::Complex64;

/// Euclidean norm of a complex vector.
pub fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Conjugate-linear inner product `x^H y`.
pub fn dot_c(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn to_complex(x: &[f64]) -> Vec<C64> {
    x.iter().map(|&v| C64::new(v, 0.0)).collect()
}
