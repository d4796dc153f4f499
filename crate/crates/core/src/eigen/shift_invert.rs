use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::qz::refine_pair;
use super::solution::{normalize, relative_residual, EigenPair, EigenSolution, PairFlag};
use crate::error::SolverError;
use crate::linalg::{CsrMatrix, SparseLu, C64};
use crate::operators::{Domain, Pencil};

#[derive(Clone, Copy, Debug)]
pub struct ShiftInvertOptions {
    pub shift: C64,
    pub k: usize,
    pub residual_tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Reject shifts where the estimated `1/cond(A0 - σ A1)` falls below this.
    pub rcond_tol: f64,
    /// Subspace size; defaults to `max(2k, k + 8)`.
    pub block: Option<usize>,
    pub zero_tol: f64,
}

impl Default for ShiftInvertOptions {
    fn default() -> Self {
        Self {
            shift: C64::new(0.0, 0.0),
            k: 6,
            residual_tol: 1e-8,
            max_iter: 500,
            seed: 0,
            rcond_tol: 1e-13,
            block: None,
            zero_tol: 1e-8,
        }
    }
}

fn mul_sparse_dense(a: &CsrMatrix<C64>, q: &Mat<C64>) -> Mat<C64> {
    let mut out = Mat::zeros(a.nrows(), q.ncols());
    for c in 0..q.ncols() {
        for i in 0..a.nrows() {
            let mut acc = C64::new(0.0, 0.0);
            for (j, v) in a.row(i) {
                acc += v * q[(j, c)];
            }
            out[(i, c)] = acc;
        }
    }
    out
}

/// Twice-iterated modified Gram-Schmidt. Columns that collapse are replaced
/// by fresh random directions.
fn orthonormalize(q: &mut Mat<C64>, rng: &mut ChaCha8Rng) {
    let (n, m) = (q.nrows(), q.ncols());
    for j in 0..m {
        for attempt in 0..4 {
            let before: f64 = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            for _ in 0..2 {
                for k in 0..j {
                    let mut d = C64::new(0.0, 0.0);
                    for i in 0..n {
                        d += q[(i, k)].conj() * q[(i, j)];
                    }
                    for i in 0..n {
                        let t = q[(i, k)];
                        q[(i, j)] -= d * t;
                    }
                }
            }
            let after: f64 = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            if after > 1e-10 * before && after > 0.0 {
                for i in 0..n {
                    q[(i, j)] /= after;
                }
                break;
            }
            assert!(attempt < 3, "could not extend orthonormal basis");
            for i in 0..n {
                q[(i, j)] = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            }
        }
    }
}

/// Eigenpairs nearest `shift` by subspace iteration on
/// `(A0 - σ A1)^{-1} A1` with Rayleigh-Ritz extraction.
pub fn solve_shift_invert(
    p: impl AsRef<Pencil>,
    opts: &ShiftInvertOptions,
) -> Result<EigenSolution, SolverError> {
    let p = p.as_ref();
    let n = p.dim();
    if opts.k == 0 || opts.k > n {
        return Err(SolverError::InvalidArgument(format!("k = {} for dimension {n}", opts.k)));
    }
    let sigma = opts.shift;
    let a_sigma = p.eval(sigma);
    let lu = SparseLu::new(&a_sigma)?;
    let rc = lu.rcond(a_sigma.norm_1());
    if !(rc >= opts.rcond_tol) {
        return Err(SolverError::Factorization(format!(
            "A0 - sigma A1 is numerically singular at sigma = {sigma} (rcond {rc:e})"
        )));
    }
    let n0 = p.a0.norm_1();
    let n1 = p.a1.norm_1();
    let m = opts.block.unwrap_or((2 * opts.k).max(opts.k + 8)).min(n).max(opts.k);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut q = Mat::from_fn(n, m, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    orthonormalize(&mut q, &mut rng);

    let target = opts.residual_tol * 1e-3;
    let mut prev: Vec<C64> = Vec::new();
    let mut worst = f64::INFINITY;
    let mut last_refine: Option<usize> = None;
    for it in 0..opts.max_iter {
        let w = lu.solve_mat(&mul_sparse_dense(&p.a1, &q));
        let h = q.adjoint() * &w;
        let evd = h
            .eigen()
            .map_err(|e| SolverError::Factorization(format!("Ritz eigensolver: {e:?}")))?;
        let theta: Vec<C64> = (0..m).map(|i| evd.S()[i]).collect();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| theta[b].norm().partial_cmp(&theta[a].norm()).unwrap());
        let tmax = theta[order[0]].norm();
        let live: Vec<usize> =
            order.into_iter().filter(|&i| theta[i].norm() > 1e-10 * tmax && tmax > 0.0).collect();
        let take = live.len().min(opts.k);
        let y = evd.U();
        let mut pairs = Vec::with_capacity(take);
        worst = 0.0;
        for &i in &live[..take] {
            let lambda = sigma + C64::new(1.0, 0.0) / theta[i];
            let mut x: Vec<C64> = (0..n)
                .map(|r| (0..m).map(|c| q[(r, c)] * y[(c, i)]).sum())
                .collect();
            normalize(&mut x);
            let res = relative_residual(p, lambda, &x, n0, n1);
            worst = worst.max(res);
            pairs.push((lambda, res, x));
        }
        let vals: Vec<C64> = pairs.iter().map(|t| t.0).collect();
        let close = |tol: f64| {
            prev.len() == vals.len() && prev.iter().zip(&vals).all(|(a, b)| (a - b).norm() <= tol * b.norm().max(1e-300))
        };
        let settled = close(1e-13);
        // Clustered spectra make the iteration crawl; finish the stragglers
        // with Rayleigh quotient steps once the Ritz values stop moving.
        let stalled = worst > target
            && (close(1e-9) || it + 1 == opts.max_iter)
            && last_refine.map_or(true, |l| it >= l + 25);
        if stalled {
            last_refine = Some(it);
            worst = 0.0;
            for (lambda, res, x) in pairs.iter_mut() {
                if *res > target {
                    *res = refine_pair(p, lambda, x, n0, n1, *res);
                }
                worst = worst.max(*res);
            }
        }
        let done = worst <= target
            || (worst <= opts.residual_tol && (settled || stalled))
            || (m == n && worst <= opts.residual_tol);
        if done || (it + 1 == opts.max_iter && worst <= opts.residual_tol) {
            let zero_cut = opts.zero_tol * n0 / if n1 > 0.0 { n1 } else { 1.0 };
            let mut sol = EigenSolution {
                solver: "shift_invert".into(),
                dim: n,
                pairs: pairs
                    .into_iter()
                    .map(|(lambda, residual, vector)| {
                        let flag = if p.domain == Domain::PuncturedPlane && lambda.norm() <= zero_cut {
                            PairFlag::ExcludedZero
                        } else if residual <= opts.residual_tol {
                            PairFlag::Ok
                        } else {
                            PairFlag::LargeResidual
                        };
                        EigenPair { lambda: Some(lambda), beta: 1.0, residual, flag, vector }
                    })
                    .collect(),
                notes: vec![format!("converged after {} iterations", it + 1)],
            };
            if take < opts.k {
                sol.notes.push(format!(
                    "requested {} eigenpairs but the pencil has only {take} finite eigenvalues",
                    opts.k
                ));
            }
            sol.sort();
            return Ok(sol);
        }
        prev = vals;
        q = w;
        orthonormalize(&mut q, &mut rng);
    }
    Err(SolverError::NoConvergence { iterations: opts.max_iter, residual: worst })
}
