use serde::Serialize;

use super::decomposition::{build_decomposition, DecompositionKind};
use crate::eigen::{solve_dense_qz, QzOptions};
use crate::error::Error;
use crate::fem::{assemble_forms, MaterialSpec};
use crate::linalg::C64;
use crate::mesh::Mesh;
use crate::operators::{build_original_pencil, build_schur_pencil, ZeroMean};

#[derive(Clone, Debug, Serialize)]
pub struct ProbeLevel {
    pub level: usize,
    pub n_edges: usize,
    pub h: f64,
    /// Finite eigenvalues of the original pencil with `|λ| < δ`.
    pub original_count: usize,
    pub original_eigenvalues: Vec<C64>,
    /// `‖P_W1 u‖² / ‖u‖²` for each counted eigenvector.
    pub w1_fractions: Vec<f64>,
    /// Finite eigenvalues of the modified (Schur) pencil with `|λ| < δ`.
    pub modified_count: usize,
}

/// Count eigenvalues inside the disc of radius `delta` across a mesh
/// sequence, for the original and modified discretizations.
pub fn essential_spectrum_probe(
    meshes: &[Mesh],
    spec: &MaterialSpec,
    omega: f64,
    delta: f64,
    mode: ZeroMean,
    qz: &QzOptions,
) -> Result<Vec<ProbeLevel>, Error> {
    let mut out = Vec::with_capacity(meshes.len());
    for (level, mesh) in meshes.iter().enumerate() {
        let forms = assemble_forms(mesh, spec)?;
        let orig = solve_dense_qz(build_original_pencil(&forms, omega)?, qz)?;
        let dec = build_decomposition(&forms, DecompositionKind::Original)?;
        let p1 = dec.w1.as_ref().expect("original decomposition has W1");
        let mut vals = Vec::new();
        let mut fr = Vec::new();
        for p in orig.finite() {
            let l = p.lambda.unwrap();
            if l.norm() < delta {
                vals.push(l);
                let w = p1.apply(&p.vector);
                fr.push(dec.norm_sq(&w) / dec.norm_sq(&p.vector));
            }
        }
        let schur = solve_dense_qz(build_schur_pencil(&forms, omega, mode)?, qz)?;
        let modified_count = schur.finite().filter(|p| p.lambda.unwrap().norm() < delta).count();
        out.push(ProbeLevel {
            level,
            n_edges: mesh.n_edges(),
            h: mesh.max_edge_length(),
            original_count: vals.len(),
            original_eigenvalues: vals,
            w1_fractions: fr,
            modified_count,
        });
    }
    Ok(out)
}
