use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Lu;
use faer::Mat;

use super::{norm2, CsrMatrix, C64};
use crate::error::SolverError;

/// Sparse LU factorization of a complex square matrix.
pub struct SparseLu {
    n: usize,
    lu: Lu<usize, C64>,
}

impl SparseLu {
    pub fn new(a: &CsrMatrix<C64>) -> Result<Self, SolverError> {
        if a.nrows() != a.ncols() {
            return Err(SolverError::Dimension(format!(
                "cannot factor a {}x{} matrix",
                a.nrows(),
                a.ncols()
            )));
        }
        let lu = a
            .to_faer()
            .sp_lu()
            .map_err(|e| SolverError::Factorization(format!("sparse LU: {e:?}")))?;
        Ok(Self { n: a.nrows(), lu })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let mut m = Mat::from_fn(self.n, 1, |i, _| b[i]);
        self.lu.solve_in_place(m.as_mut());
        (0..self.n).map(|i| m[(i, 0)]).collect()
    }

    pub fn solve_adjoint(&self, b: &[C64]) -> Vec<C64> {
        let mut m = Mat::from_fn(self.n, 1, |i, _| b[i]);
        self.lu.solve_adjoint_in_place(m.as_mut());
        (0..self.n).map(|i| m[(i, 0)]).collect()
    }

    pub fn solve_mat(&self, b: &Mat<C64>) -> Mat<C64> {
        let mut m = b.clone();
        self.lu.solve_in_place(m.as_mut());
        m
    }

    /// Lower estimate of `1 / ‖A^{-1}‖₂`, from a few steps of inverse
    /// iteration on `A^H A` with a fixed start vector.
    pub fn sigma_min_estimate(&self, steps: usize) -> f64 {
        let n = self.n;
        let mut x: Vec<C64> = (0..n)
            .map(|i| C64::new(1.0 + ((i * 7919) % 13) as f64 / 13.0, ((i * 104729) % 7) as f64 / 17.0))
            .collect();
        let mut sigma = f64::INFINITY;
        for _ in 0..steps {
            let nx = norm2(&x);
            if !(nx > 0.0) || !nx.is_finite() {
                return 0.0;
            }
            for v in x.iter_mut() {
                *v /= nx;
            }
            let y = self.solve(&x);
            let z = self.solve_adjoint(&y);
            let ny = norm2(&y);
            if !ny.is_finite() {
                return 0.0;
            }
            let s = 1.0 / ny;
            let converged = (sigma - s).abs() <= 1e-6 * s;
            sigma = s;
            x = z;
            if converged {
                break;
            }
        }
        sigma
    }

    /// Reciprocal condition estimate relative to the supplied norm of `A`.
    pub fn rcond(&self, norm_a: f64) -> f64 {
        if norm_a == 0.0 {
            return 0.0;
        }
        self.sigma_min_estimate(30) / norm_a
    }
}
