//! Spherical Bessel functions of the first kind.

/// `j_0(x), ..., j_{n_max}(x)` by Miller's downward recurrence, normalized
/// against the closed form of `j_0` or `j_1`.
pub fn spherical_jn(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    if ax > 0.5 && ax > n_max as f64 + 1.0 {
        // upward recurrence is stable once x exceeds the order
        let (s, c) = x.sin_cos();
        out[0] = s / x;
        if n_max >= 1 {
            out[1] = s / (x * x) - c / x;
        }
        for n in 1..n_max {
            out[n + 1] = (2 * n + 1) as f64 / x * out[n] - out[n - 1];
        }
        return out;
    }
    let start = n_max.max(ax.ceil() as usize) + 20 + (10.0 * ax.sqrt()) as usize;
    let mut f_next = 0.0;
    let mut f = 1e-200;
    for n in (1..=start).rev() {
        let f_prev = (2 * n + 1) as f64 / x * f - f_next;
        f_next = f;
        f = f_prev;
        if n - 1 <= n_max {
            out[n - 1] = f;
        }
        if f.abs() > 1e200 {
            f *= 1e-200;
            f_next *= 1e-200;
            for v in out.iter_mut() {
                *v *= 1e-200;
            }
        }
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let j1 = s / (x * x) - c / x;
    // out[1] needs the recurrence value even when n_max == 0
    let f1 = if n_max >= 1 { out[1] } else { f_next };
    let scale = if j0.abs() >= j1.abs() { j0 / out[0] } else { j1 / f1 };
    for v in out.iter_mut() {
        *v *= scale;
    }
    out
}

/// `j_n(x)` for a single order.
pub fn spherical_j(n: usize, x: f64) -> f64 {
    spherical_jn(n, x)[n]
}
