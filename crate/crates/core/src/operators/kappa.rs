use serde::Serialize;

use crate::error::Error;
use crate::fem::Forms;
use crate::linalg::dense::hermitian_generalized;
use crate::linalg::{dot_c, CsrMatrix, SparseLu, C64};

#[derive(Clone, Debug, Serialize)]
pub struct KappaReport {
    pub omega: f64,
    pub sigma_min: f64,
    pub norm: f64,
    pub relative: f64,
    pub warning: Option<String>,
}

/// Relative threshold below which `K = K_c - omega^2 M_eps` is reported as
/// nearly singular.
pub const KAPPA_WARN: f64 = 1e-8;

fn x_dot(x: &CsrMatrix<C64>, u: &[C64], v: &[C64]) -> C64 {
    dot_c(u, &x.mul_vec(v))
}

fn seed_vector(n: usize) -> Vec<C64> {
    (0..n)
        .map(|i| C64::new(1.0 + ((i * 7919) % 13) as f64 / 13.0, ((i * 104729) % 7) as f64 / 17.0))
        .collect()
}

/// Power iteration for the dominant eigenvalue of an `X`-self-adjoint,
/// positive operator.
fn dominant(x: &CsrMatrix<C64>, steps: usize, op: impl Fn(&[C64]) -> Option<Vec<C64>>) -> f64 {
    let mut v = seed_vector(x.nrows());
    let mut est = 0.0;
    for _ in 0..steps {
        let nv = x_dot(x, &v, &v).re.sqrt();
        if !(nv > 0.0) || !nv.is_finite() {
            return f64::INFINITY;
        }
        v.iter_mut().for_each(|z| *z /= nv);
        let Some(w) = op(&v) else { return f64::INFINITY };
        let r = x_dot(x, &v, &w).re;
        if !r.is_finite() {
            return f64::INFINITY;
        }
        let done = (r - est).abs() <= 1e-8 * r.abs();
        est = r;
        v = w;
        if done {
            break;
        }
    }
    est
}

/// Estimate the smallest singular value of `K = K_c - omega^2 M_eps` as a map
/// from the `H(curl)` norm to its dual, relative to `‖K‖` in the same norms,
/// and warn when `omega` is close to an interior resonance.
///
/// Measured this way the gradient block contributes `omega^2 ε` and the ratio
/// does not degrade with `h`, so only genuine loss of injectivity triggers.
pub fn check_kappa(forms: &Forms, omega: f64) -> KappaReport {
    let k = forms.helmholtz(omega);
    let x = forms.curl_curl_unit.lin_comb(1.0, &forms.mass_l2, 1.0).to_complex();
    let (Ok(kl), Ok(xl)) = (SparseLu::new(&k), SparseLu::new(&x)) else {
        return report(omega, 0.0, f64::NAN);
    };
    let kh = k.adjoint();
    // ‖K‖² is the top eigenvalue of X^{-1} K^H X^{-1} K
    let top = dominant(&x, 200, |v| Some(xl.solve(&kh.mul_vec(&xl.solve(&k.mul_vec(v))))));
    // 1/σ_min² is the top eigenvalue of K^{-1} X K^{-H} X
    let inv = dominant(&x, 300, |v| {
        let w = kl.solve(&x.mul_vec(&kl.solve_adjoint(&x.mul_vec(v))));
        w.iter().all(|z| z.is_finite()).then_some(w)
    });
    let sigma_min = if inv.is_finite() && inv > 0.0 { inv.sqrt().recip() } else { 0.0 };
    report(omega, sigma_min, top.max(0.0).sqrt())
}

fn report(omega: f64, sigma_min: f64, norm: f64) -> KappaReport {
    let relative = if norm > 0.0 { sigma_min / norm } else { 0.0 };
    let warning = (!(relative >= KAPPA_WARN)).then(|| {
        format!(
            "K is nearly singular at omega = {omega}: sigma_min/|K| = {relative:e}; \
             omega may be close to an interior resonance"
        )
    });
    KappaReport { omega, sigma_min, norm, relative, warning }
}

/// Smallest discrete interior resonances: `omega` such that
/// `K_c - omega^2 M_eps` is singular, excluding the gradient kernel.
/// Dense; real symmetric materials only.
pub fn interior_resonances(forms: &Forms, count: usize) -> Result<Vec<f64>, Error> {
    let kc = forms.curl_curl.map(|v| v.re).to_dense();
    let me = forms.mass_eps.map(|v| v.re).to_dense();
    let (vals, _) = hermitian_generalized(kc.as_ref(), me.as_ref())?;
    let top = vals.last().copied().unwrap_or(0.0).abs();
    Ok(vals
        .into_iter()
        .filter(|&v| v > 1e-8 * top)
        .take(count)
        .map(f64::sqrt)
        .collect())
}
