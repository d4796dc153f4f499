use super::{norm, scale, signed_volume, sub, Geometry, Mesh, LOCAL_EDGES};
use crate::error::MeshError;

/// Parent information produced by one uniform refinement step.
#[derive(Clone, Debug)]
pub struct RefinementMap {
    /// Parent tetrahedron of each child.
    pub parent: Vec<usize>,
    /// Barycentric coordinates, relative to the parent's vertex order, of
    /// each child vertex (in the child's own vertex order).
    pub child_bary: Vec<[[f64; 4]; 4]>,
}

const CORNERS: [[usize; 4]; 4] = [[0, 4, 5, 6], [4, 1, 7, 8], [5, 7, 2, 9], [6, 8, 9, 3]];
// octahedron diagonals and the 4-cycle of midpoints around each
const DIAGONALS: [([usize; 2], [usize; 4]); 3] =
    [([4, 9], [5, 6, 8, 7]), ([5, 8], [4, 6, 9, 7]), ([6, 7], [4, 5, 9, 8])];

fn local_bary(node: usize) -> [f64; 4] {
    let mut b = [0.0; 4];
    if node < 4 {
        b[node] = 1.0;
    } else {
        let [p, q] = LOCAL_EDGES[node - 4];
        b[p] = 0.5;
        b[q] = 0.5;
    }
    b
}

/// Red (1:8) refinement.
pub fn refine_uniform(mesh: &Mesh) -> Result<Mesh, MeshError> {
    refine_uniform_with_parents(mesh).map(|(m, _)| m)
}

/// Red refinement that also reports the parent of every child tetrahedron.
///
/// Old vertices keep their indices; the midpoint of edge `e` becomes vertex
/// `n_vertices + e`.
pub fn refine_uniform_with_parents(mesh: &Mesh) -> Result<(Mesh, RefinementMap), MeshError> {
    let nv = mesh.n_vertices();
    let mut verts = mesh.vertices.clone();
    verts.reserve(mesh.n_edges());
    let on_boundary = mesh.boundary_edge_mask();
    for (e, &[a, b]) in mesh.edges.iter().enumerate() {
        let mut m = scale(super::add(mesh.vertices[a], mesh.vertices[b]), 0.5);
        if let Geometry::Ball { radius } = mesh.geometry {
            if on_boundary[e] {
                m = scale(m, radius / norm(m));
            }
        }
        verts.push(m);
    }

    let mut tets = Vec::with_capacity(8 * mesh.n_tets());
    let mut parent = Vec::with_capacity(8 * mesh.n_tets());
    let mut child_bary = Vec::with_capacity(8 * mesh.n_tets());
    for (t, tet) in mesh.tets.iter().enumerate() {
        let mut g = [0usize; 10];
        g[..4].copy_from_slice(tet);
        for k in 0..6 {
            g[4 + k] = nv + mesh.tet_edges[t][k];
        }

        let mut best = 0;
        let mut best_len = f64::INFINITY;
        for (d, ([p, q], _)) in DIAGONALS.iter().enumerate() {
            let len = norm(sub(verts[g[*p]], verts[g[*q]]));
            if len < best_len * (1.0 - 1e-12) {
                best = d;
                best_len = len;
            }
        }
        let ([p, q], cyc) = DIAGONALS[best];

        let mut locals: Vec<[usize; 4]> = CORNERS.to_vec();
        for i in 0..4 {
            locals.push([p, q, cyc[i], cyc[(i + 1) % 4]]);
        }
        for mut loc in locals {
            if signed_volume(&verts, loc.map(|l| g[l])) < 0.0 {
                loc.swap(2, 3);
            }
            tets.push(loc.map(|l| g[l]));
            parent.push(t);
            child_bary.push(loc.map(local_bary));
        }
    }
    let refined = Mesh::new(verts, tets, mesh.geometry)?;
    Ok((refined, RefinementMap { parent, child_bary }))
}

#[cfg(test)]
mod tests {
    use super::super::{generate_cube, validate};
    use super::*;

    #[test]
    fn counts_follow_recurrence() {
        let m = generate_cube(1).unwrap();
        let r = refine_uniform(&m).unwrap();
        let (v, e, f, t) = (m.n_vertices(), m.n_edges(), m.n_faces(), m.n_tets());
        assert_eq!(r.n_vertices(), v + e);
        assert_eq!(r.n_edges(), 2 * e + 3 * f + t);
        assert_eq!(r.n_faces(), 4 * f + 8 * t);
        assert_eq!(r.n_tets(), 8 * t);
        assert!(validate(&r).is_valid());
    }

    #[test]
    fn children_fill_parent() {
        let m = generate_cube(2).unwrap();
        let (r, map) = refine_uniform_with_parents(&m).unwrap();
        let mut vol = vec![0.0; m.n_tets()];
        for (c, &p) in map.parent.iter().enumerate() {
            vol[p] += r.tet_volume(c);
        }
        for (p, v) in vol.iter().enumerate() {
            assert!((v - m.tet_volume(p)).abs() < 1e-15);
        }
        // barycentrics reproduce the child coordinates
        for (c, bary) in map.child_bary.iter().enumerate() {
            let pt = m.tets[map.parent[c]];
            for (k, b) in bary.iter().enumerate() {
                let mut x = [0.0; 3];
                for i in 0..4 {
                    for d in 0..3 {
                        x[d] += b[i] * m.vertices[pt[i]][d];
                    }
                }
                let y = r.vertices[r.tets[c][k]];
                assert!(norm(sub(x, y)) < 1e-15);
            }
        }
    }
}
