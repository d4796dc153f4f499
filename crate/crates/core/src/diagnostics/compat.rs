use faer::Mat;

use super::decomposition::{build_decomposition, DecompositionKind, SubspaceDecomposition};
use crate::error::Error;
use crate::fem::Forms;
use crate::linalg::dense::hermitian_generalized;
use crate::linalg::{CsrMatrix, Triplets};
use crate::mesh::{refine_uniform_with_parents, Mesh, RefinementMap, LOCAL_EDGES};

/// A coarse mesh and its successive uniform refinements.
pub struct NestedHierarchy {
    pub meshes: Vec<Mesh>,
    pub maps: Vec<RefinementMap>,
}

impl NestedHierarchy {
    pub fn new(coarse: Mesh, refinements: usize) -> Result<Self, Error> {
        let mut meshes = vec![coarse];
        let mut maps = Vec::with_capacity(refinements);
        for _ in 0..refinements {
            let (m, map) = refine_uniform_with_parents(meshes.last().unwrap())?;
            meshes.push(m);
            maps.push(map);
        }
        Ok(Self { meshes, maps })
    }

    /// Ancestor in level `coarse` of every tetrahedron of level `fine`, with
    /// the barycentric coordinates of the fine vertices in the ancestor.
    pub fn ancestry(&self, coarse: usize, fine: usize) -> Vec<(usize, [[f64; 4]; 4])> {
        assert!(coarse <= fine && fine < self.meshes.len());
        let nt = self.meshes[fine].n_tets();
        let mut out: Vec<(usize, [[f64; 4]; 4])> = (0..nt)
            .map(|t| {
                let mut id = [[0.0; 4]; 4];
                for k in 0..4 {
                    id[k][k] = 1.0;
                }
                (t, id)
            })
            .collect();
        for lvl in (coarse..fine).rev() {
            let map = &self.maps[lvl];
            for (t, b) in out.iter_mut() {
                let pb = map.child_bary[*t];
                let mut nb = [[0.0; 4]; 4];
                for k in 0..4 {
                    for i in 0..4 {
                        for j in 0..4 {
                            nb[k][j] += b[k][i] * pb[i][j];
                        }
                    }
                }
                *t = map.parent[*t];
                *b = nb;
            }
        }
        out
    }
}

/// Edge-element prolongation from level `coarse` to level `fine`: each
/// fine edge DoF is the line integral of the coarse Whitney field.
pub fn nested_prolongation(h: &NestedHierarchy, coarse: usize, fine: usize) -> CsrMatrix<f64> {
    let cm = &h.meshes[coarse];
    let fm = &h.meshes[fine];
    let anc = h.ancestry(coarse, fine);
    let mut done = vec![false; fm.n_edges()];
    let mut t = Triplets::new(fm.n_edges(), cm.n_edges());
    for (ft, (ct, bary)) in anc.iter().enumerate() {
        for (k, &[a, b]) in LOCAL_EDGES.iter().enumerate() {
            let e = fm.tet_edges[ft][k];
            if done[e] {
                continue;
            }
            done[e] = true;
            // orient along the global fine edge
            let (ba, bb) = if fm.tet_edge_signs[ft][k] > 0.0 { (bary[a], bary[b]) } else { (bary[b], bary[a]) };
            for (ck, &[p, q]) in LOCAL_EDGES.iter().enumerate() {
                let mp = 0.5 * (ba[p] + bb[p]);
                let mq = 0.5 * (ba[q] + bb[q]);
                let v = mp * (bb[q] - ba[q]) - mq * (bb[p] - ba[p]);
                if v != 0.0 {
                    t.push(e, cm.tet_edges[*ct][ck], v * cm.tet_edge_signs[*ct][ck]);
                }
            }
        }
    }
    t.to_csr()
}

fn coefficients(kind: DecompositionKind, omega: f64, lambda: Option<f64>) -> Result<(f64, f64), Error> {
    let w = -1.0 / (omega * omega);
    match kind {
        DecompositionKind::Modified => Ok((w, w)),
        DecompositionKind::Original => match lambda {
            Some(l) if l != 0.0 => Ok((-1.0 / l, w)),
            _ => Err(Error::Config("original compatibility defect needs a real nonzero lambda".into())),
        },
    }
}

/// `(T - I) M` for dense `M`, with `T = P_V + c1 P_W1 + c2 P_W`.
fn t_minus_identity(dec: &SubspaceDecomposition, c1: f64, c2: f64, m: &Mat<f64>) -> Mat<f64> {
    let mut out = dec.w.apply_mat(m) * faer::Scale(c2 - 1.0);
    if let Some(p1) = &dec.w1 {
        out += p1.apply_mat(m) * faer::Scale(c1 - 1.0);
    }
    out
}

/// `sup_u ‖(T_f P - P T_c) u‖_X / ‖P u‖_X` over the coarse space, with
/// `T` the modified operator (or, for the original decomposition, the
/// original one at a real `lambda`).
pub fn compatibility_defect(
    coarse: &Forms,
    fine: &Forms,
    prolong: &CsrMatrix<f64>,
    omega: f64,
    kind: DecompositionKind,
    lambda: Option<f64>,
) -> Result<f64, Error> {
    let (c1, c2) = coefficients(kind, omega, lambda)?;
    let dc = build_decomposition(coarse, kind)?;
    let df = build_decomposition(fine, kind)?;
    let p = prolong.to_dense();
    let nc = p.ncols();
    let eye = Mat::<f64>::identity(nc, nc);
    // D = T_f P - P T_c = (T_f - I) P - P (T_c - I)
    let d = t_minus_identity(&df, c1, c2, &p) - &p * t_minus_identity(&dc, c1, c2, &eye);
    let xd = df.gram.mul_dense(d.as_ref());
    let xp = df.gram.mul_dense(p.as_ref());
    let a = d.transpose() * xd;
    let b = p.transpose() * xp;
    let a = Mat::from_fn(nc, nc, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    let b = Mat::from_fn(nc, nc, |i, j| 0.5 * (b[(i, j)] + b[(j, i)]));
    let (vals, _) = hermitian_generalized(a.as_ref(), b.as_ref())?;
    Ok(vals.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}
