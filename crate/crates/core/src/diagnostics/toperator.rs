use faer::Mat;
use serde::{Deserialize, Serialize};

use super::decomposition::{DecompositionKind, SubspaceDecomposition};
use crate::error::Error;
use crate::linalg::C64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum TVariant {
    Identity,
    /// `P_V - conj(λ)^{-1} P_W1 - ω^{-2} P_W2`.
    Original,
    /// `P_V~ - ω^{-2} P_W~`.
    Modified,
    /// `blockdiag(T~, conj(λ)^{-l} I)` for the two-field pencils.
    Aux { l: u8, n_z: usize },
}

/// A T-operator kept in factored form: a combination of the decomposition
/// projectors plus, for the two-field variants, a scalar on the `z` block.
pub struct TOperator<'a> {
    pub variant: TVariant,
    pub lambda: C64,
    pub omega: f64,
    dec: &'a SubspaceDecomposition,
    c_v: C64,
    c_w1: C64,
    c_w: C64,
    c_z: C64,
    n_z: usize,
}

fn inv(z: C64) -> C64 {
    C64::new(1.0, 0.0) / z
}

pub fn build_t<'a>(
    dec: &'a SubspaceDecomposition,
    lambda: C64,
    omega: f64,
    variant: TVariant,
) -> Result<TOperator<'a>, Error> {
    let one = C64::new(1.0, 0.0);
    let w2 = C64::new(-1.0 / (omega * omega), 0.0);
    let (c_w1, c_w, c_z, n_z) = match variant {
        TVariant::Identity => (one, one, one, 0),
        TVariant::Original => {
            if dec.kind != DecompositionKind::Original {
                return Err(Error::Config("original T needs the original decomposition".into()));
            }
            if lambda.norm() == 0.0 {
                return Err(Error::Config("original T is undefined at lambda = 0".into()));
            }
            (-inv(lambda.conj()), w2, one, 0)
        }
        TVariant::Modified | TVariant::Aux { .. } => {
            if dec.kind != DecompositionKind::Modified {
                return Err(Error::Config("modified T needs the modified decomposition".into()));
            }
            match variant {
                TVariant::Aux { l, n_z } => {
                    if l == 1 && lambda.norm() == 0.0 {
                        return Err(Error::Config("aux T with l = 1 is undefined at lambda = 0".into()));
                    }
                    let cz = if l == 0 { one } else { inv(lambda.conj()) };
                    (w2, w2, cz, n_z)
                }
                _ => (w2, w2, one, 0),
            }
        }
    };
    Ok(TOperator { variant, lambda, omega, dec, c_v: one, c_w1, c_w, c_z, n_z })
}

impl TOperator<'_> {
    pub fn dim(&self) -> usize {
        self.dec.dim() + self.n_z
    }

    fn apply_with(&self, x: &[C64], cv: C64, cw1: C64, cw: C64, cz: C64) -> Vec<C64> {
        let n = self.dec.dim();
        let (u, z) = x.split_at(n);
        if self.variant == TVariant::Identity {
            return x.to_vec();
        }
        // T u = c_v u + (c_w1 - c_v) P_W1 u + (c_w - c_v) P_W u
        let mut y: Vec<C64> = u.iter().map(|v| cv * v).collect();
        if let Some(p1) = &self.dec.w1 {
            for (a, b) in y.iter_mut().zip(p1.apply(u)) {
                *a += (cw1 - cv) * b;
            }
        }
        for (a, b) in y.iter_mut().zip(self.dec.w.apply(u)) {
            *a += (cw - cv) * b;
        }
        y.extend(z.iter().map(|v| cz * v));
        y
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.apply_with(x, self.c_v, self.c_w1, self.c_w, self.c_z)
    }

    pub fn apply_inverse(&self, x: &[C64]) -> Vec<C64> {
        self.apply_with(x, inv(self.c_v), inv(self.c_w1), inv(self.c_w), inv(self.c_z))
    }

    pub fn to_dense(&self) -> Mat<C64> {
        let n = self.dim();
        let mut m = Mat::zeros(n, n);
        let mut e = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            e[j] = C64::new(1.0, 0.0);
            let col = self.apply(&e);
            for i in 0..n {
                m[(i, j)] = col[i];
            }
            e[j] = C64::new(0.0, 0.0);
        }
        m
    }
}
