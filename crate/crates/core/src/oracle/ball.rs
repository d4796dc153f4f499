use serde::{Deserialize, Serialize};

use super::bessel::spherical_jn;
use super::roots::scan_roots;
use crate::error::OracleError;

/// Ball of radius `radius` filled with constant scalar `eps` and `mu`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub omega: f64,
    pub eps: f64,
    pub mu: f64,
    pub radius: f64,
    /// Highest spherical-harmonic degree considered.
    pub n_max: usize,
}

impl OracleConfig {
    pub fn unit(omega: f64, n_max: usize) -> Self {
        Self { omega, eps: 1.0, mu: 1.0, radius: 1.0, n_max }
    }

    /// Dimensionless wavenumber `ω √(εμ) R`.
    pub fn kr(&self) -> f64 {
        self.omega * (self.eps * self.mu).sqrt() * self.radius
    }

    fn check(&self) -> Result<(), OracleError> {
        let ok = [self.omega, self.eps, self.mu, self.radius].iter().all(|v| *v > 0.0 && v.is_finite());
        if !ok || self.n_max == 0 {
            return Err(OracleError::InvalidArgument(format!("{self:?}")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleEigenvalue {
    /// Spherical-harmonic degree.
    pub n: usize,
    pub lambda: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OriginalSequences {
    /// Eigenvalues accumulating at zero, one per degree.
    pub toward_zero: Vec<OracleEigenvalue>,
    /// Eigenvalues diverging to infinity, one per degree.
    pub toward_infinity: Vec<OracleEigenvalue>,
}

/// `j_n(x) + x j_n'(x) = x j_{n-1}(x) - n j_n(x)`.
fn riccati_derivative(n: usize, x: f64) -> f64 {
    let j = spherical_jn(n, x);
    x * j[n - 1] - n as f64 * j[n]
}

const ROOT_TOL: f64 = 1e-14;
const RESONANCE_TOL: f64 = 1e-10;

/// Interior resonances of degree `n` up to `x_max`: zeros of `j_n` and of
/// `x j_{n-1} - n j_n`, in the dimensionless variable `k R`.
pub fn ball_resonances(n: usize, x_max: f64) -> Result<(Vec<f64>, Vec<f64>), OracleError> {
    if n == 0 {
        return Err(OracleError::InvalidArgument("degree must be positive".into()));
    }
    let step = 0.05;
    let zj = scan_roots(&|x| spherical_jn(n, x)[n], 0.5, x_max, step, ROOT_TOL)?;
    let zd = scan_roots(&|x| riccati_derivative(n, x), 0.5, x_max, step, ROOT_TOL)?;
    Ok((zj, zd))
}

fn ensure_off_resonance(n: usize, x: f64, roots: &[f64]) -> Result<(), OracleError> {
    for &r in roots {
        if (r - x).abs() <= RESONANCE_TOL * r {
            return Err(OracleError::Resonance { degree: n, k: x, root: r });
        }
    }
    Ok(())
}

/// Eigenvalues of the modified problem,
/// `λ_n = (k R j_{n-1}(kR) / j_n(kR) - n) / (μ R)`, each of multiplicity
/// `2n + 1`, sorted ascending.
pub fn modified_ball_eigenvalues(cfg: &OracleConfig) -> Result<Vec<OracleEigenvalue>, OracleError> {
    cfg.check()?;
    let x = cfg.kr();
    let j = spherical_jn(cfg.n_max, x);
    let mut out = Vec::with_capacity(cfg.n_max);
    for n in 1..=cfg.n_max {
        let (zj, _) = ball_resonances(n, x + 1.0)?;
        ensure_off_resonance(n, x, &zj)?;
        let lambda = (x * j[n - 1] / j[n] - n as f64) / (cfg.mu * cfg.radius);
        out.push(OracleEigenvalue { n, lambda, multiplicity: 2 * n + 1 });
    }
    out.sort_by(|a, b| a.lambda.partial_cmp(&b.lambda).unwrap());
    Ok(out)
}

/// The two eigenvalue families of the original problem. The family toward
/// infinity coincides with the modified eigenvalues; the family toward zero
/// is `λ_n = -(kR)^2 j_n / ((x j_{n-1} - n j_n) μ R)`.
pub fn original_ball_sequences(cfg: &OracleConfig) -> Result<OriginalSequences, OracleError> {
    cfg.check()?;
    let x = cfg.kr();
    let j = spherical_jn(cfg.n_max, x);
    let mut zero = Vec::with_capacity(cfg.n_max);
    for n in 1..=cfg.n_max {
        let (_, zd) = ball_resonances(n, x + 1.0)?;
        ensure_off_resonance(n, x, &zd)?;
        let d = x * j[n - 1] - n as f64 * j[n];
        let lambda = -x * x * j[n] / d / (cfg.mu * cfg.radius);
        zero.push(OracleEigenvalue { n, lambda, multiplicity: 2 * n + 1 });
    }
    Ok(OriginalSequences { toward_zero: zero, toward_infinity: modified_ball_eigenvalues(cfg)? })
}

/// Repeat each eigenvalue by its multiplicity.
pub fn expand(vals: &[OracleEigenvalue]) -> Vec<f64> {
    vals.iter().flat_map(|v| std::iter::repeat_n(v.lambda, v.multiplicity)).collect()
}
