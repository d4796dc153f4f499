use crate::error::{AssemblyError, Error};
use crate::linalg::{CsrMatrix, Triplets, C64};
use crate::mesh::{cross, dot, extract_boundary, norm, signed_volume, sub, Mesh, SurfaceMesh, LOCAL_EDGES};

use super::material::Tensor;
use super::{Dofs, Material, MaterialSpec};

/// All assembled bilinear forms for one mesh and material.
///
/// Matrices follow `A[i][j] = a(phi_j, phi_i)`: rows are test functions.
#[derive(Clone, Debug)]
pub struct Forms {
    pub dofs: Dofs,
    pub surface: SurfaceMesh,
    pub material: Material,
    /// `(mu^{-1} curl u, curl v)`.
    pub curl_curl: CsrMatrix<C64>,
    /// `(eps u, v)`.
    pub mass_eps: CsrMatrix<C64>,
    /// Curl-curl with unit coefficient.
    pub curl_curl_unit: CsrMatrix<f64>,
    /// Edge-element L2 mass with unit coefficient.
    pub mass_l2: CsrMatrix<f64>,
    /// Tangential-trace mass `<nu x u, nu x v>` on the boundary.
    pub mass_t: CsrMatrix<f64>,
    /// Edge-by-boundary-node coupling `-<grad psi, nu x u>`.
    pub coupling: CsrMatrix<f64>,
    /// Boundary P1 stiffness.
    pub lap_bnd: CsrMatrix<f64>,
    /// Boundary P1 mass.
    pub mass_bnd: CsrMatrix<f64>,
    /// Discrete gradient, edges by vertices.
    pub grad: CsrMatrix<f64>,
    /// Discrete curl, faces by edges.
    pub curl: CsrMatrix<f64>,
}

/// Barycentric gradients and volume of a tetrahedron.
pub(crate) fn tet_gradients(v: &[[f64; 3]; 4]) -> ([[f64; 3]; 4], f64) {
    let a = sub(v[1], v[0]);
    let b = sub(v[2], v[0]);
    let c = sub(v[3], v[0]);
    let det = dot(a, cross(b, c));
    let g1 = scale(cross(b, c), 1.0 / det);
    let g2 = scale(cross(c, a), 1.0 / det);
    let g3 = scale(cross(a, b), 1.0 / det);
    let g0 = [-(g1[0] + g2[0] + g3[0]), -(g1[1] + g2[1] + g3[1]), -(g1[2] + g2[2] + g3[2])];
    ([g0, g1, g2, g3], det / 6.0)
}

/// In-plane barycentric gradients, area and unit normal of a triangle.
pub(crate) fn tri_gradients(y: &[[f64; 3]; 3]) -> ([[f64; 3]; 3], f64, [f64; 3]) {
    let n = cross(sub(y[1], y[0]), sub(y[2], y[0]));
    let n2 = dot(n, n);
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        let e = sub(y[(i + 2) % 3], y[(i + 1) % 3]);
        g[i] = scale(cross(n, e), 1.0 / n2);
    }
    let l = n2.sqrt();
    (g, 0.5 * l, scale(n, 1.0 / l))
}

fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn bilin(x: [f64; 3], m: &Tensor, y: [f64; 3]) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            s += m[i][j] * (x[i] * y[j]);
        }
    }
    s
}

/// `G[e][hi] = 1`, `G[e][lo] = -1`.
pub fn gradient_matrix(mesh: &Mesh) -> CsrMatrix<f64> {
    let mut t = Triplets::with_capacity(mesh.n_edges(), mesh.n_vertices(), 2 * mesh.n_edges());
    for (e, &[lo, hi]) in mesh.edges.iter().enumerate() {
        t.push(e, lo, -1.0);
        t.push(e, hi, 1.0);
    }
    t.to_csr()
}

/// Incidence of sorted faces `(a, b, c)` with their edges, using the
/// circulation `a -> b -> c -> a`.
pub fn curl_matrix(mesh: &Mesh) -> CsrMatrix<f64> {
    let mut t = Triplets::with_capacity(mesh.n_faces(), mesh.n_edges(), 3 * mesh.n_faces());
    for (f, &[a, b, c]) in mesh.faces.iter().enumerate() {
        t.push(f, mesh.edge_index(a, b).unwrap(), 1.0);
        t.push(f, mesh.edge_index(b, c).unwrap(), 1.0);
        t.push(f, mesh.edge_index(a, c).unwrap(), -1.0);
    }
    t.to_csr()
}

/// Assemble every form needed by the pencils and diagnostics.
pub fn assemble_forms(mesh: &Mesh, spec: &MaterialSpec) -> Result<Forms, Error> {
    let material = Material::new(spec.clone(), mesh.n_tets())?;
    let surface = extract_boundary(mesh)?;
    let dofs = Dofs::new(mesh, &surface);
    let ne = mesh.n_edges();

    let cap = 36 * mesh.n_tets();
    let mut kc = Triplets::with_capacity(ne, ne, cap);
    let mut me = Triplets::with_capacity(ne, ne, cap);
    let mut ku = Triplets::with_capacity(ne, ne, cap);
    let mut ml = Triplets::with_capacity(ne, ne, cap);

    for (t, tet) in mesh.tets.iter().enumerate() {
        let x = tet.map(|v| mesh.vertices[v]);
        let vol = signed_volume(&mesh.vertices, *tet);
        let h = LOCAL_EDGES.iter().map(|&[a, b]| norm(sub(x[a], x[b]))).fold(0.0, f64::max);
        if !(vol > 1e-14 * h * h * h) {
            return Err(AssemblyError::DegenerateTet { tet: t, volume: vol }.into());
        }
        let (g, vol) = tet_gradients(&x);
        let eps = material.eps(t);
        let mu = material.mu_inv(t);
        let sg = mesh.tet_edge_signs[t];
        let ids = mesh.tet_edges[t];
        let curls: [[f64; 3]; 6] = LOCAL_EDGES.map(|[a, b]| scale(cross(g[a], g[b]), 2.0));
        let mass = |p: usize, q: usize| vol * if p == q { 2.0 } else { 1.0 } / 20.0;
        for i in 0..6 {
            let [a, b] = LOCAL_EDGES[i];
            for j in 0..6 {
                let [c, d] = LOCAL_EDGES[j];
                let s = sg[i] * sg[j];
                let curl_e = bilin(curls[i], mu, curls[j]) * (vol * s);
                let curl_u = dot(curls[i], curls[j]) * vol * s;
                let terms = [
                    (mass(a, c), g[b], g[d]),
                    (-mass(a, d), g[b], g[c]),
                    (-mass(b, c), g[a], g[d]),
                    (mass(b, d), g[a], g[c]),
                ];
                let mut m_e = C64::new(0.0, 0.0);
                let mut m_u = 0.0;
                for (w, gi, gj) in terms {
                    m_e += bilin(gi, eps, gj) * w;
                    m_u += w * dot(gi, gj);
                }
                kc.push(ids[i], ids[j], curl_e);
                me.push(ids[i], ids[j], m_e * s);
                ku.push(ids[i], ids[j], curl_u);
                ml.push(ids[i], ids[j], m_u * s);
            }
        }
    }

    let nb = surface.n_nodes();
    let mut mt = Triplets::new(ne, ne);
    let mut bc = Triplets::new(ne, nb);
    let mut lb = Triplets::new(nb, nb);
    let mut mb = Triplets::new(nb, nb);
    const TRI_EDGES: [[usize; 2]; 3] = [[0, 1], [0, 2], [1, 2]];
    for (k, tri) in surface.triangles.iter().enumerate() {
        let y = tri.map(|v| mesh.vertices[v]);
        let (g, area, nu) = tri_gradients(&y);
        // orientation must agree with the adjacent tetrahedron
        let tet = mesh.tets[surface.tri_tets[k]];
        let opp = tet.iter().find(|v| !tri.contains(v)).unwrap();
        let c = scale([y[0][0] + y[1][0] + y[2][0], y[0][1] + y[1][1] + y[2][1], y[0][2] + y[1][2] + y[2][2]], 1.0 / 3.0);
        if dot(nu, sub(c, mesh.vertices[*opp])) <= 0.0 {
            return Err(AssemblyError::Orientation { tri: k }.into());
        }
        let loc = surface.local_triangles[k];
        let mut eid = [0usize; 3];
        let mut es = [0.0; 3];
        for (i, &[a, b]) in TRI_EDGES.iter().enumerate() {
            eid[i] = mesh.edge_index(tri[a], tri[b]).unwrap();
            es[i] = if tri[a] < tri[b] { 1.0 } else { -1.0 };
        }
        let mass = |p: usize, q: usize| area * if p == q { 2.0 } else { 1.0 } / 12.0;
        for i in 0..3 {
            let [a, b] = TRI_EDGES[i];
            for j in 0..3 {
                let [c, d] = TRI_EDGES[j];
                let v = mass(a, c) * dot(g[b], g[d]) - mass(a, d) * dot(g[b], g[c])
                    - mass(b, c) * dot(g[a], g[d])
                    + mass(b, d) * dot(g[a], g[c]);
                mt.push(eid[i], eid[j], v * es[i] * es[j]);
            }
            let nb_ = cross(nu, g[b]);
            let na = cross(nu, g[a]);
            for p in 0..3 {
                let v = -(area / 3.0) * (dot(g[p], nb_) - dot(g[p], na));
                bc.push(eid[i], loc[p], v * es[i]);
            }
        }
        for p in 0..3 {
            for q in 0..3 {
                lb.push(loc[p], loc[q], area * dot(g[p], g[q]));
                mb.push(loc[p], loc[q], mass(p, q));
            }
        }
    }

    Ok(Forms {
        dofs,
        surface,
        material,
        curl_curl: kc.to_csr(),
        mass_eps: me.to_csr(),
        curl_curl_unit: ku.to_csr(),
        mass_l2: ml.to_csr(),
        mass_t: mt.to_csr(),
        coupling: bc.to_csr(),
        lap_bnd: lb.to_csr(),
        mass_bnd: mb.to_csr(),
        grad: gradient_matrix(mesh),
        curl: curl_matrix(mesh),
    })
}

impl Forms {
    /// `K = K_c - omega^2 M_eps`.
    pub fn helmholtz(&self, omega: f64) -> CsrMatrix<C64> {
        self.curl_curl.lin_comb(C64::new(1.0, 0.0), &self.mass_eps, C64::new(-omega * omega, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_cube;

    #[test]
    fn gradients_sum_to_zero_and_reproduce_linear() {
        let x = [[0.1, 0.0, 0.0], [1.0, 0.2, 0.0], [0.0, 1.0, 0.3], [0.2, 0.1, 1.0]];
        let (g, vol) = tet_gradients(&x);
        assert!(vol > 0.0);
        for i in 0..4 {
            for j in 0..4 {
                let d = dot(g[i], sub(x[j], x[0]));
                let want = if i == j { 1.0 } else { 0.0 } - if i == 0 { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-14);
            }
        }
        let y = [[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let (gt, a, n) = tri_gradients(&y);
        assert!((a - 1.0).abs() < 1e-15 && (n[2] - 1.0).abs() < 1e-15);
        assert!((gt[1][0] - 0.5).abs() < 1e-15 && (gt[2][1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn structural_identities() {
        let m = generate_cube(2).unwrap();
        let f = assemble_forms(&m, &MaterialSpec::vacuum()).unwrap();
        let dg = f.curl.matmul(&f.grad);
        assert_eq!(dg.max_abs(), 0.0);
        // curl-curl annihilates gradients
        let kg = f.curl_curl_unit.matmul(&f.grad);
        assert!(kg.max_abs() < 1e-13);
        // coupling annihilates constants on the boundary
        let ones = vec![1.0; f.dofs.n_boundary_nodes];
        assert!(f.coupling.mul_vec(&ones).iter().all(|v| v.abs() < 1e-14));
        assert!(f.lap_bnd.mul_vec(&ones).iter().all(|v| v.abs() < 1e-13));
        let area: f64 = f.mass_bnd.values().iter().sum();
        assert!((area - 6.0).abs() < 1e-13);
        // mass of a constant field: u = (1,0,0) has edge dofs dx
        let u: Vec<f64> = m.edges.iter().map(|&[a, b]| m.vertices[b][0] - m.vertices[a][0]).collect();
        let mu = f.mass_l2.mul_vec(&u);
        let e: f64 = u.iter().zip(&mu).map(|(a, b)| a * b).sum();
        assert!((e - 1.0).abs() < 1e-13);
        // tangential mass of the same field: |nu x e_x|^2 integrates to 4
        let mt = f.mass_t.mul_vec(&u);
        let t: f64 = u.iter().zip(&mt).map(|(a, b)| a * b).sum();
        assert!((t - 4.0).abs() < 1e-13);
    }

    #[test]
    fn degenerate_tet_is_rejected() {
        let m = Mesh::new(
            vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]],
            vec![[0, 1, 2, 3]],
            crate::mesh::Geometry::Polyhedral,
        )
        .unwrap();
        let e = assemble_forms(&m, &MaterialSpec::vacuum()).unwrap_err();
        assert!(matches!(e, Error::Assembly(AssemblyError::DegenerateTet { tet: 0, .. })));
    }
}
