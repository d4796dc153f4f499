use faer::linalg::solvers::{Llt, Solve};
use faer::{Mat, Side};
use serde::{Deserialize, Serialize};

use crate::error::AssemblyError;
use crate::fem::Forms;
use crate::linalg::{CsrMatrix, C64};

/// Gram-orthogonal projector onto the span of the columns of `basis`:
/// `P = B (B^T X B)^{-1} B^T X`.
pub struct OrthoProjector {
    basis: Mat<f64>,
    xb: Mat<f64>,
    llt: Llt<f64>,
}

impl OrthoProjector {
    pub fn new(basis: Mat<f64>, gram: &CsrMatrix<f64>) -> Result<Self, AssemblyError> {
        let xb = gram.mul_dense(basis.as_ref());
        let g = basis.transpose() * &xb;
        let g = Mat::from_fn(g.nrows(), g.ncols(), |i, j| 0.5 * (g[(i, j)] + g[(j, i)]));
        let llt = g.llt(Side::Lower).map_err(|_| {
            AssemblyError::RankDeficient("subspace basis is linearly dependent".into())
        })?;
        Ok(Self { basis, xb, llt })
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &Mat<f64> {
        &self.basis
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let re: Vec<f64> = x.iter().map(|v| v.re).collect();
        let im: Vec<f64> = x.iter().map(|v| v.im).collect();
        let pr = self.apply_real(&re);
        let pi = self.apply_real(&im);
        pr.into_iter().zip(pi).map(|(a, b)| C64::new(a, b)).collect()
    }

    pub fn apply_real(&self, x: &[f64]) -> Vec<f64> {
        let c = Mat::from_fn(self.dim(), 1, |i, _| (0..x.len()).map(|r| self.xb[(r, i)] * x[r]).sum());
        let y = self.llt.solve(&c);
        let out = &self.basis * &y;
        (0..x.len()).map(|i| out[(i, 0)]).collect()
    }

    /// `P M` for a dense real `M`.
    pub fn apply_mat(&self, m: &Mat<f64>) -> Mat<f64> {
        let c = self.xb.transpose() * m;
        &self.basis * self.llt.solve(&c)
    }

    pub fn to_dense(&self) -> Mat<f64> {
        let c = self.xb.transpose().to_owned();
        &self.basis * self.llt.solve(&c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecompositionKind {
    /// `X = V ⊕ W1 ⊕ W2` with boundary-harmonic gradients in `W1` and
    /// gradients of interior potentials in `W2`.
    Original,
    /// `X = V~ ⊕ W~` with all gradients in `W~`.
    Modified,
}

/// Ambient-orthogonal splitting of the edge space.
pub struct SubspaceDecomposition {
    pub kind: DecompositionKind,
    /// Ambient gram matrix: `K_unit + M_l2 (+ M_t)`.
    pub gram: CsrMatrix<f64>,
    /// `W1` (original only).
    pub w1: Option<OrthoProjector>,
    /// `W2` (original) or `W~` (modified).
    pub w: OrthoProjector,
}

impl SubspaceDecomposition {
    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    /// Projector onto `V` (or `V~`): the identity minus the gradient pieces.
    pub fn apply_v(&self, x: &[C64]) -> Vec<C64> {
        let mut y = x.to_vec();
        for p in self.w1.iter().chain(std::iter::once(&self.w)) {
            for (a, b) in y.iter_mut().zip(p.apply(x)) {
                *a -= b;
            }
        }
        y
    }

    /// Squared gram norm `x^H X x`.
    pub fn norm_sq(&self, x: &[C64]) -> f64 {
        let gx = self.gram.mul_vec(x);
        x.iter().zip(&gx).map(|(a, b)| (a.conj() * b).re).sum()
    }
}

fn dense_columns(a: &CsrMatrix<f64>, cols: &[usize]) -> Mat<f64> {
    let mut m = Mat::zeros(a.nrows(), cols.len());
    let mut pos = vec![usize::MAX; a.ncols()];
    for (k, &c) in cols.iter().enumerate() {
        pos[c] = k;
    }
    for (i, j, v) in a.triplets() {
        if pos[j] != usize::MAX {
            m[(i, pos[j])] = v;
        }
    }
    m
}

pub fn build_decomposition(
    forms: &Forms,
    kind: DecompositionKind,
) -> Result<SubspaceDecomposition, AssemblyError> {
    let base = forms.curl_curl_unit.lin_comb(1.0, &forms.mass_l2, 1.0);
    let nv = forms.dofs.n_vertices;
    match kind {
        DecompositionKind::Modified => {
            let cols: Vec<usize> = (0..nv - 1).collect();
            let w = OrthoProjector::new(dense_columns(&forms.grad, &cols), &base)?;
            Ok(SubspaceDecomposition { kind, gram: base, w1: None, w })
        }
        DecompositionKind::Original => {
            let gram = base.lin_comb(1.0, &forms.mass_t, 1.0);
            let interior = &forms.dofs.interior_nodes;
            let bnodes = &forms.dofs.boundary_nodes;
            let w2 = OrthoProjector::new(dense_columns(&forms.grad, interior), &gram)?;

            // discrete harmonic extension of boundary hat functions
            let a = forms.grad.transpose().matmul(&forms.mass_l2).matmul(&forms.grad);
            let a_ii = a.select(interior, interior).to_dense();
            let a_ib = a.select(interior, bnodes).to_dense();
            let nb = bnodes.len();
            let mut h = Mat::<f64>::zeros(nv, nb - 1);
            if !interior.is_empty() {
                let llt = a_ii.llt(Side::Lower).map_err(|_| {
                    AssemblyError::RankDeficient("interior potential block is singular".into())
                })?;
                let ext = llt.solve(&a_ib);
                for (r, &v) in interior.iter().enumerate() {
                    for c in 0..nb - 1 {
                        h[(v, c)] = -ext[(r, c)];
                    }
                }
            }
            for (c, &v) in bnodes.iter().take(nb - 1).enumerate() {
                h[(v, c)] = 1.0;
            }
            let w1_basis = forms.grad.mul_dense(h.as_ref());
            let w1 = OrthoProjector::new(w1_basis, &gram)?;
            Ok(SubspaceDecomposition { kind, gram, w1: Some(w1), w: w2 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{assemble_forms, MaterialSpec};
    use crate::mesh::generate_cube;

    #[test]
    fn pieces_are_orthogonal_and_complete() {
        let m = generate_cube(2).unwrap();
        let f = assemble_forms(&m, &MaterialSpec::vacuum()).unwrap();
        let d = build_decomposition(&f, DecompositionKind::Original).unwrap();
        assert_eq!(d.w1.as_ref().unwrap().dim(), 25);
        assert_eq!(d.w.dim(), 1);
        let x = d.gram.to_dense();
        let p1 = d.w1.as_ref().unwrap().to_dense();
        let p2 = d.w.to_dense();
        let cross = p1.transpose() * &x * &p2;
        assert!(cross.norm_max() < 1e-12);
        // idempotent
        assert!((&p1 * &p1 - &p1).norm_max() < 1e-12);
        // range of G is covered: (P1 + P2) G = G
        let g = f.grad.to_dense();
        assert!(((&p1 + &p2) * &g - &g).norm_max() < 1e-11);

        let dm = build_decomposition(&f, DecompositionKind::Modified).unwrap();
        assert_eq!(dm.w.dim(), 26);
        let pw = dm.w.to_dense();
        assert!((&pw * &g - &g).norm_max() < 1e-11);
    }
}
