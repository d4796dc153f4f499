use faer::{Mat, Side};

use super::toperator::TOperator;
use crate::error::{AssemblyError, Error, SolverError};
use crate::linalg::{CsrMatrix, Triplets, C64};
use crate::operators::Pencil;

/// Gram matrix on `u ⊕ z`: `blockdiag(X, L_eff)`.
pub fn aux_gram(x: &CsrMatrix<f64>, lap: &CsrMatrix<f64>) -> CsrMatrix<f64> {
    let n = x.nrows();
    let mut t = Triplets::new(n + lap.nrows(), n + lap.nrows());
    x.push_into(&mut t, 0, 0, 1.0);
    lap.push_into(&mut t, n, n, 1.0);
    t.to_csr()
}

/// `inf_u sup_v |<A(λ) u, T v>| / (‖u‖ ‖v‖)` in the gram norm, evaluated at
/// the `λ` stored in `t`. Computed as the smallest singular value of
/// `R^{-H} T^H A R^{-1}` with `X = R^H R`.
pub fn inf_sup_constant(pencil: &Pencil, t: &TOperator<'_>, gram: &CsrMatrix<f64>) -> Result<f64, Error> {
    let n = pencil.dim();
    if t.dim() != n || gram.nrows() != n {
        return Err(SolverError::Dimension(format!(
            "pencil {n}, T {}, gram {}",
            t.dim(),
            gram.nrows()
        ))
        .into());
    }
    let a = pencil.eval(t.lambda).to_dense();
    let th = t.to_dense().adjoint().to_owned();
    let m = th * a;
    let g = gram.to_dense();
    let llt = g
        .llt(Side::Lower)
        .map_err(|_| AssemblyError::RankDeficient("gram matrix is not positive definite".into()))?;
    let l: Mat<C64> = Mat::from_fn(n, n, |i, j| C64::new(llt.L()[(i, j)], 0.0));
    // L^{-1} M L^{-T}
    let mut y = m;
    faer::linalg::triangular_solve::solve_lower_triangular_in_place(l.as_ref(), y.as_mut(), faer::Par::Seq);
    let mut yt = y.transpose().to_owned();
    faer::linalg::triangular_solve::solve_lower_triangular_in_place(l.as_ref(), yt.as_mut(), faer::Par::Seq);
    let s = yt
        .singular_values()
        .map_err(|e| SolverError::Factorization(format!("svd: {e:?}")))?;
    Ok(s.last().copied().unwrap_or(0.0))
}
