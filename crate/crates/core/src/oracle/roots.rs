//! Sign-change scanning with safeguarded secant refinement.

use crate::error::OracleError;

/// Root of `f` in `[a, b]`, given `f(a) f(b) <= 0`. Secant steps that leave
/// the bracket fall back to bisection.
pub fn refine_root(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Result<f64, OracleError> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(OracleError::BracketFailure { a, b });
    }
    for _ in 0..200 {
        let lo = a.min(b);
        let hi = a.max(b);
        if hi - lo <= tol * lo.abs().max(hi.abs()).max(1.0) {
            return Ok(0.5 * (a + b));
        }
        // one secant step (bisection if it leaves the bracket), then one bisection
        let mut x = b - fb * (b - a) / (fb - fa);
        if !(x > lo && x < hi) {
            x = 0.5 * (a + b);
        }
        for probe in [x, 0.5 * (a + b)] {
            let fx = f(probe);
            if fx == 0.0 {
                return Ok(probe);
            }
            if probe <= a.min(b) || probe >= a.max(b) {
                continue;
            }
            if fx.signum() == fa.signum() {
                a = probe;
                fa = fx;
            } else {
                b = probe;
                fb = fx;
            }
        }
    }
    Err(OracleError::BracketFailure { a, b })
}

/// All sign changes of `f` on `(lo, hi]` at resolution `step`, refined.
pub fn scan_roots(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, step: f64, tol: f64) -> Result<Vec<f64>, OracleError> {
    if !(step > 0.0) || !(hi > lo) {
        return Err(OracleError::InvalidArgument(format!("bad scan [{lo}, {hi}] step {step}")));
    }
    let mut roots = Vec::new();
    let mut a = lo;
    let mut fa = f(a);
    while a < hi {
        let b = (a + step).min(hi);
        let fb = f(b);
        if fa.signum() != fb.signum() && fa.is_finite() && fb.is_finite() {
            roots.push(refine_root(f, a, b, tol)?);
        }
        a = b;
        fa = fb;
    }
    Ok(roots)
}
