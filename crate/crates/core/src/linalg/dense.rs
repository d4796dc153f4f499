use faer::linalg::solvers::Solve;
use faer::{Mat, MatRef, Side};

use super::C64;
use crate::error::{AssemblyError, SolverError};

pub type DMat = Mat<C64>;

/// `(A + A^H) / 2`.
pub fn herm_part(a: MatRef<'_, C64>) -> DMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

/// `(A - A^H) / (2i)`.
pub fn skew_part(a: MatRef<'_, C64>) -> DMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| {
        (a[(i, j)] - a[(j, i)].conj()) * C64::new(0.0, -0.5)
    })
}

pub fn to_complex_mat(a: MatRef<'_, f64>) -> DMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| C64::new(a[(i, j)], 0.0))
}

pub fn eigenvalues_hermitian(a: MatRef<'_, C64>) -> Result<Vec<f64>, SolverError> {
    herm_part(a)
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| SolverError::Factorization(format!("hermitian eigensolver: {e:?}")))
}

/// Eigenvalues of the Hermitian-definite problem `A x = θ B x`, ascending.
/// `opt_vectors` additionally returns `B`-orthonormal eigenvectors.
pub fn hermitian_generalized(
    a: MatRef<'_, f64>,
    b: MatRef<'_, f64>,
) -> Result<(Vec<f64>, Mat<f64>), AssemblyError> {
    let llt = b
        .llt(Side::Lower)
        .map_err(|_| AssemblyError::RankDeficient("gram matrix is not positive definite".into()))?;
    let l = llt.L();
    let n = a.nrows();
    // C = L^{-1} A L^{-T}
    let mut c = a.to_owned();
    faer::linalg::triangular_solve::solve_lower_triangular_in_place(l, c.as_mut(), faer::Par::Seq);
    let mut ct = c.transpose().to_owned();
    faer::linalg::triangular_solve::solve_lower_triangular_in_place(l, ct.as_mut(), faer::Par::Seq);
    let sym = Mat::from_fn(n, n, |i, j| 0.5 * (ct[(i, j)] + ct[(j, i)]));
    let evd = sym
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| AssemblyError::RankDeficient(format!("eigensolver failed: {e:?}")))?;
    let vals: Vec<f64> = (0..n).map(|i| evd.S()[i]).collect();
    let mut vecs = evd.U().to_owned();
    faer::linalg::triangular_solve::solve_upper_triangular_in_place(
        l.transpose(),
        vecs.as_mut(),
        faer::Par::Seq,
    );
    Ok((vals, vecs))
}

/// Solve `A X = B` for dense real SPD `A`.
pub fn spd_solve(a: MatRef<'_, f64>, b: MatRef<'_, f64>) -> Result<Mat<f64>, AssemblyError> {
    let llt = a
        .llt(Side::Lower)
        .map_err(|_| AssemblyError::RankDeficient("matrix is not positive definite".into()))?;
    Ok(llt.solve(b))
}
