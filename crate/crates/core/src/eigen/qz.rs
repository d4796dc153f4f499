use faer::linalg::solvers::Solve;
use faer::Mat;

use super::solution::{normalize, relative_residual, EigenPair, EigenSolution, PairFlag};
use crate::error::SolverError;
use crate::linalg::{dot_c, SparseLu, C64};
use crate::operators::{Domain, Pencil};

const SHIFT_CANDIDATES: [(f64, f64); 4] = [(0.31, -0.47), (-0.53, 0.29), (0.17, 0.61), (-0.71, -0.13)];

#[derive(Clone, Copy, Debug)]
pub struct QzOptions {
    pub dense_cap: usize,
    /// Pairs with chordal `|beta|` at or below this are infinite.
    pub beta_tol: f64,
    pub residual_tol: f64,
    /// Zero eigenvalues on the punctured plane: `|lambda| <= zero_tol ‖A0‖/‖A1‖`.
    pub zero_tol: f64,
}

impl Default for QzOptions {
    fn default() -> Self {
        Self { dense_cap: 6000, beta_tol: 1e-8, residual_tol: 1e-8, zero_tol: 1e-8 }
    }
}

/// All eigenvalues of a pencil from a dense Schur decomposition of the
/// shift-inverted operator.
pub fn solve_dense_qz(p: impl AsRef<Pencil>, opts: &QzOptions) -> Result<EigenSolution, SolverError> {
    let p = p.as_ref();
    let n = p.dim();
    if n > opts.dense_cap {
        return Err(SolverError::DimensionTooLarge { dim: n, cap: opts.dense_cap });
    }
    let n0 = p.a0.norm_1();
    let n1 = p.a1.norm_1();
    let s0 = if n0 > 0.0 { n0 } else { 1.0 };
    let s1 = if n1 > 0.0 { n1 } else { 1.0 };
    // Schur form of (A0 - σ A1)^{-1} A1 with θ = 1/(λ - σ). The large exact
    // kernels of A1 land at θ = 0 instead of forming an infinite block.
    let scale = s0 / s1;
    let mut pick = None;
    for c in SHIFT_CANDIDATES {
        let sigma = C64::new(c.0, c.1) * scale;
        let shifted = p.eval(sigma);
        if let Ok(lu) = SparseLu::new(&shifted) {
            if lu.rcond(shifted.norm_1()) >= 1e-10 {
                pick = Some((sigma, shifted));
                break;
            }
        }
    }
    let Some((sigma, shifted)) = pick else {
        return Err(SolverError::Factorization("no regular shift found for the spectral transform".into()));
    };
    let a = p.a1.to_dense() * faer::Scale(C64::new(scale / s0, 0.0));
    let b = shifted.to_dense() * faer::Scale(C64::new(1.0 / s0, 0.0));
    let m = b.partial_piv_lu().solve(&a);
    let evd = m.eigen().map_err(|e| SolverError::Factorization(format!("Schur iteration failed: {e:?}")))?;
    let u: Mat<C64> = evd.U().to_owned();
    let theta = evd.S();

    let zero_cut = opts.zero_tol * n0 / s1;
    let mut pairs = Vec::with_capacity(n);
    for j in 0..n {
        // θ is in units of 1/scale: λ = σ + scale/θ = scale (σ θ / scale + 1) / θ
        let (al, be) = (sigma / scale * theta[j] + 1.0, theta[j]);
        let c = (al.norm_sqr() + be.norm_sqr()).sqrt();
        let beta = if c > 0.0 { be.norm() / c } else { 0.0 };
        if beta <= opts.beta_tol {
            pairs.push(EigenPair {
                lambda: None,
                beta,
                residual: f64::NAN,
                flag: PairFlag::Infinite,
                vector: vec![],
            });
            continue;
        }
        let mut lambda = al / be * scale;
        let mut v: Vec<C64> = (0..n).map(|i| u[(i, j)]).collect();
        normalize(&mut v);
        let mut residual = relative_residual(p, lambda, &v, n0, n1);
        if residual > opts.residual_tol {
            residual = refine_pair(p, &mut lambda, &mut v, n0, n1, residual);
        }
        let flag = if p.domain == Domain::PuncturedPlane && lambda.norm() <= zero_cut {
            PairFlag::ExcludedZero
        } else if residual <= opts.residual_tol {
            PairFlag::Ok
        } else {
            PairFlag::LargeResidual
        };
        pairs.push(EigenPair { lambda: Some(lambda), beta, residual, flag, vector: v });
    }
    let mut sol = EigenSolution { solver: "qz".into(), dim: n, pairs, notes: vec![] };
    sol.sort();
    let bad = sol.count(PairFlag::LargeResidual);
    if bad > 0 {
        sol.notes.push(format!("{bad} finite pairs exceed the residual tolerance {:e}", opts.residual_tol));
    }
    Ok(sol)
}

/// Rayleigh quotient iteration, kept only while the residual drops.
/// QZ pairs inside tight clusters next to a large infinite block can lose accuracy.
pub(super) fn refine_pair(p: &Pencil, lambda: &mut C64, v: &mut Vec<C64>, n0: f64, n1: f64, res0: f64) -> f64 {
    let mut best = res0;
    let mut x = v.clone();
    let mut mu = *lambda;
    for _ in 0..4 {
        let shift = mu + C64::new(1e-12, 1e-12) * (1.0 + mu.norm());
        let Ok(lu) = SparseLu::new(&p.eval(shift)) else { break };
        x = lu.solve(&p.a1.mul_vec(&x));
        if x.iter().any(|z| !z.is_finite()) {
            break;
        }
        normalize(&mut x);
        let num = dot_c(&x, &p.a0.mul_vec(&x));
        let den = dot_c(&x, &p.a1.mul_vec(&x));
        if den.norm() > 0.0 {
            mu = num / den;
        }
        let r = relative_residual(p, mu, &x, n0, n1);
        if r < best {
            best = r;
            *lambda = mu;
            v.clone_from(&x);
        }
        if best <= 1e-14 {
            break;
        }
    }
    best
}
