use serde::{Deserialize, Serialize};

use crate::error::{Error, SolverError};
use crate::fem::Forms;
use crate::linalg::{CsrMatrix, SparseLu, Triplets, C64};

/// How the constant null space of the boundary Laplacian is removed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ZeroMean {
    /// Solve with `L + gamma M`. `None` picks `1e-6 * max|L|`.
    Gamma(Option<f64>),
    /// Solve on the mass-weighted mean-zero subspace.
    Deflation,
}

impl Default for ZeroMean {
    fn default() -> Self {
        ZeroMean::Gamma(None)
    }
}

impl ZeroMean {
    pub fn resolve_gamma(&self, lap: &CsrMatrix<f64>) -> Option<f64> {
        match *self {
            ZeroMean::Gamma(Some(g)) => Some(g),
            ZeroMean::Gamma(None) => Some(1e-6 * lap.max_abs()),
            ZeroMean::Deflation => None,
        }
    }
}

/// The discrete operator `u -> z` with `L z = -B^T u`, where `z` has zero
/// boundary mean and `L` is the boundary Laplacian.
pub struct DiscreteS {
    coupling: CsrMatrix<f64>,
    n_b: usize,
    gamma: Option<f64>,
    /// `M_bnd 1`
    mean: Vec<f64>,
    lu: SparseLu,
}

impl DiscreteS {
    pub fn new(forms: &Forms, mode: ZeroMean) -> Result<Self, Error> {
        let n_b = forms.dofs.n_boundary_nodes;
        let gamma = mode.resolve_gamma(&forms.lap_bnd);
        let system = match gamma {
            Some(g) => {
                if !(g > 0.0) {
                    return Err(Error::Config(format!("gamma must be positive, got {g}")));
                }
                forms.lap_bnd.lin_comb(1.0, &forms.mass_bnd, g).to_complex()
            }
            None => {
                // bordered system [L m; m^T 0] with m = M 1
                let m = forms.mass_bnd.mul_vec(&vec![1.0; n_b]);
                let mut t = Triplets::new(n_b + 1, n_b + 1);
                forms.lap_bnd.push_into(&mut t, 0, 0, 1.0);
                for (k, &v) in m.iter().enumerate() {
                    t.push(k, n_b, v);
                    t.push(n_b, k, v);
                }
                t.to_csr().to_complex()
            }
        };
        let lu = SparseLu::new(&system)?;
        let mean = forms.mass_bnd.mul_vec(&vec![1.0; n_b]);
        let s = Self { coupling: forms.coupling.clone(), n_b, gamma, mean, lu };
        let rc = s.lu.rcond(system.norm_1());
        if !(rc > 1e-14) {
            return Err(SolverError::Factorization(format!(
                "boundary Laplacian system is numerically singular (rcond {rc:e})"
            ))
            .into());
        }
        Ok(s)
    }

    pub fn gamma(&self) -> Option<f64> {
        self.gamma
    }

    pub fn n_boundary_nodes(&self) -> usize {
        self.n_b
    }

    /// Solve `L_eff z = f` (or the deflated analogue).
    pub fn solve(&self, f: &[C64]) -> Vec<C64> {
        match self.gamma {
            Some(_) => self.lu.solve(f),
            None => {
                let mut rhs = f.to_vec();
                rhs.push(C64::new(0.0, 0.0));
                let mut z = self.lu.solve(&rhs);
                z.truncate(self.n_b);
                z
            }
        }
    }

    /// Remove the rounding component of `f` along `M 1`. Every `B^T u`
    /// sums to zero exactly, but the computed one only to rounding, and
    /// that residue is amplified by `1/gamma` in the solve.
    fn compatible(&self, mut f: Vec<C64>) -> Vec<C64> {
        let total: C64 = f.iter().sum();
        let scale = total / self.mean.iter().sum::<f64>();
        for (v, m) in f.iter_mut().zip(&self.mean) {
            *v -= scale * m;
        }
        f
    }

    /// `z = -L_eff^{-1} B^T u`.
    pub fn apply_sn(&self, u: &[C64]) -> Vec<C64> {
        let f: Vec<C64> = self.coupling.mul_vec_transpose(u).into_iter().map(|v| -v).collect();
        self.solve(&self.compatible(f))
    }

    /// `<z, 1>` in the boundary mass inner product.
    pub fn boundary_mean(&self, z: &[C64]) -> C64 {
        z.iter().zip(&self.mean).map(|(v, m)| v * m).sum()
    }

    /// Compliance matrix `C = B L_eff^{-1} B^T`, supported on boundary edges.
    pub fn compliance(&self, boundary_edges: &[usize]) -> CsrMatrix<C64> {
        let ne = self.coupling.nrows();
        let mut t = Triplets::new(ne, ne);
        for &j in boundary_edges {
            let mut f = vec![C64::new(0.0, 0.0); self.n_b];
            for (k, v) in self.coupling.row(j) {
                f[k] = C64::new(v, 0.0);
            }
            let x = self.solve(&self.compatible(f));
            let col = self.coupling.mul_vec(&x);
            for &i in boundary_edges {
                if col[i] != C64::new(0.0, 0.0) {
                    t.push(i, j, col[i]);
                }
            }
        }
        t.to_csr()
    }
}
