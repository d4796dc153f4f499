use std::fmt::Write as _;

use serde::Serialize;

use crate::linalg::{norm2, C64};
use crate::operators::Pencil;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairFlag {
    /// Finite eigenvalue whose residual meets the tolerance.
    Ok,
    /// Finite eigenvalue whose residual exceeds the tolerance.
    LargeResidual,
    /// `beta` is numerically zero.
    Infinite,
    /// Zero eigenvalue of a pencil posed on the punctured plane.
    ExcludedZero,
}

impl PairFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            PairFlag::Ok => "ok",
            PairFlag::LargeResidual => "large_residual",
            PairFlag::Infinite => "infinite",
            PairFlag::ExcludedZero => "excluded_zero",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenPair {
    /// `None` for infinite eigenvalues.
    pub lambda: Option<C64>,
    /// Chordal magnitude of `beta` after scaling (`0` means infinite).
    pub beta: f64,
    /// Relative residual (`NaN` for infinite eigenvalues).
    pub residual: f64,
    pub flag: PairFlag,
    /// Unit-norm eigenvector; empty for infinite eigenvalues.
    #[serde(skip)]
    pub vector: Vec<C64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenSolution {
    pub solver: String,
    pub dim: usize,
    /// Sorted by `|lambda|`, infinite eigenvalues last.
    pub pairs: Vec<EigenPair>,
    pub notes: Vec<String>,
}

impl EigenSolution {
    /// Finite eigenvalues that are not excluded, in sorted order.
    pub fn finite(&self) -> impl Iterator<Item = &EigenPair> {
        self.pairs.iter().filter(|p| matches!(p.flag, PairFlag::Ok | PairFlag::LargeResidual))
    }

    pub fn finite_values(&self) -> Vec<C64> {
        self.finite().map(|p| p.lambda.unwrap()).collect()
    }

    pub fn count(&self, flag: PairFlag) -> usize {
        self.pairs.iter().filter(|p| p.flag == flag).count()
    }

    /// Stable order: `|lambda|`, then real part, then imaginary part.
    pub(crate) fn sort(&mut self) {
        self.pairs.sort_by(|a, b| match (a.lambda, b.lambda) {
            (Some(x), Some(y)) => x
                .norm()
                .partial_cmp(&y.norm())
                .unwrap()
                .then(x.re.partial_cmp(&y.re).unwrap())
                .then(x.im.partial_cmp(&y.im).unwrap()),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        });
    }

    /// CSV with columns `re_lambda,im_lambda,beta,residual,flag`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("re_lambda,im_lambda,beta,residual,flag\n");
        for p in &self.pairs {
            let (re, im) = match p.lambda {
                Some(l) => (format!("{:.17e}", l.re), format!("{:.17e}", l.im)),
                None => ("inf".into(), "inf".into()),
            };
            let _ = writeln!(s, "{re},{im},{:.6e},{:.6e},{}", p.beta, p.residual, p.flag.as_str());
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("solution serializes")
    }
}

/// Normalize to unit 2-norm and make the largest entry real positive.
pub(crate) fn normalize(v: &mut [C64]) {
    let n = norm2(v);
    if n == 0.0 {
        return;
    }
    let mut big = C64::new(0.0, 0.0);
    for x in v.iter() {
        if x.norm() > big.norm() * (1.0 + 1e-12) {
            big = *x;
        }
    }
    let phase = big.conj() / big.norm() / n;
    for x in v.iter_mut() {
        *x *= phase;
    }
}

/// `‖(A0 - λ A1) x‖ / ((‖A0‖ + |λ| ‖A1‖) ‖x‖)` with matrix 1-norms.
pub fn relative_residual(p: &Pencil, lambda: C64, x: &[C64], n0: f64, n1: f64) -> f64 {
    let a = p.a0.mul_vec(x);
    let b = p.a1.mul_vec(x);
    let r: Vec<C64> = a.iter().zip(&b).map(|(u, v)| u - lambda * v).collect();
    let denom = (n0 + lambda.norm() * n1) * norm2(x);
    if denom == 0.0 {
        return f64::INFINITY;
    }
    norm2(&r) / denom
}

/// Recompute the residual of every finite pair of `sol` against `p`.
pub fn spectral_residuals(sol: &EigenSolution, p: &Pencil) -> Vec<f64> {
    let (n0, n1) = (p.a0.norm_1(), p.a1.norm_1());
    sol.pairs
        .iter()
        .map(|q| match q.lambda {
            Some(l) if !q.vector.is_empty() => relative_residual(p, l, &q.vector, n0, n1),
            _ => f64::NAN,
        })
        .collect()
}
