use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use serde::Serialize;

use crate::error::{AssemblyError, Error};
use crate::fem::assembly::tri_gradients;
use crate::fem::fields::{Curl, Gradient, ScalarField, VectorField};
use crate::fem::quadrature::triangle_rule;
use crate::fem::{curl_matrix, gradient_matrix, Forms, InterpolationRule};
use crate::fem::interpolate::{edge, face, nodal};
use crate::mesh::{dot, Mesh};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CommutingDefect {
    /// `max |G Π0 f - Π1 ∇f|`.
    pub gradient: f64,
    /// `max |D Π1 u - Π2 curl u|`.
    pub curl: f64,
}

/// Compare both paths around the gradient and curl squares of the de Rham
/// diagram, each evaluated independently by quadrature.
pub fn commuting_diagram_defect(
    mesh: &Mesh,
    scalar: &dyn ScalarField,
    vector: &dyn VectorField,
    rule: InterpolationRule,
) -> CommutingDefect {
    let g = gradient_matrix(mesh).mul_vec(&nodal(mesh, scalar));
    let e = edge(mesh, &Gradient(scalar), rule.edge_points);
    let gradient = g.iter().zip(&e).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let d = curl_matrix(mesh).mul_vec(&edge(mesh, vector, rule.edge_points));
    let f = face(mesh, &Curl(vector), rule.face_points);
    let curl = d.iter().zip(&f).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    CommutingDefect { gradient, curl }
}

/// Relative `L^2_t` distance between the tangential trace of the edge
/// interpolant of `u` and the `L^2_t` projection of the tangential trace of
/// `u` onto the boundary edge space.
pub fn trace_commutation_defect(
    mesh: &Mesh,
    forms: &Forms,
    field: &dyn VectorField,
    rule: InterpolationRule,
) -> Result<f64, Error> {
    let be = &forms.dofs.boundary_edges;
    let mut pos = vec![usize::MAX; mesh.n_edges()];
    for (k, &e) in be.iter().enumerate() {
        pos[e] = k;
    }
    let nbe = be.len();
    let interp = edge(mesh, field, rule.edge_points);
    let quad = triangle_rule(rule.face_points);
    let mut rhs = vec![0.0; nbe];
    let mut norm_sq = 0.0;
    const TRI_EDGES: [[usize; 2]; 3] = [[0, 1], [0, 2], [1, 2]];
    for tri in &forms.surface.triangles {
        let y = tri.map(|v| mesh.vertices[v]);
        let (g, area, nu) = tri_gradients(&y);
        for (b, w) in &quad {
            let x = [0, 1, 2].map(|d| b[0] * y[0][d] + b[1] * y[1][d] + b[2] * y[2][d]);
            let u = field.value(x);
            let un = dot(u, nu);
            let ut = [u[0] - un * nu[0], u[1] - un * nu[1], u[2] - un * nu[2]];
            let wt = w * 2.0 * area;
            norm_sq += wt * dot(ut, ut);
            for [i, j] in TRI_EDGES {
                let e = mesh.edge_index(tri[i], tri[j]).unwrap();
                let s = if tri[i] < tri[j] { 1.0 } else { -1.0 };
                let phi = [0, 1, 2].map(|d| b[i] * g[j][d] - b[j] * g[i][d]);
                rhs[pos[e]] += wt * s * dot(ut, phi);
            }
        }
    }
    let mtb = forms.mass_t.select(be, be).to_dense();
    let llt = mtb
        .llt(Side::Lower)
        .map_err(|_| AssemblyError::RankDeficient("boundary trace mass is singular".into()))?;
    let c = llt.solve(Mat::from_fn(nbe, 1, |i, _| rhs[i]));
    let diff = Mat::from_fn(nbe, 1, |i, _| interp[be[i]] - c[(i, 0)]);
    let d2 = (diff.transpose() * &mtb * &diff)[(0, 0)].max(0.0);
    Ok(if norm_sq > 0.0 { (d2 / norm_sq).sqrt() } else { d2.sqrt() })
}
