//! Tetrahedral meshes, their derived topology, and boundary surfaces.

mod boundary;
mod generate;
pub mod io;
mod refine;
mod validate;

use serde::{Deserialize, Serialize};

use crate::error::MeshError;

pub use boundary::{extract_boundary, SurfaceMesh};
pub use generate::{generate_ball, generate_cube};
pub use refine::{refine_uniform, refine_uniform_with_parents, RefinementMap};
pub use validate::{validate, ValidationReport, Violation};

/// Local vertex pairs of the six tetrahedron edges, `lo < hi` in local order.
pub const LOCAL_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Local faces; face `i` is opposite local vertex `i`.
pub const LOCAL_FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];

/// How new boundary vertices are placed during refinement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Geometry {
    /// Straight-sided domain; midpoints stay at midpoints.
    Polyhedral,
    /// Ball of the given radius centered at the origin; boundary midpoints
    /// are projected radially onto the sphere.
    Ball { radius: f64 },
}

/// An oriented tetrahedral mesh with global edge and face numbering.
///
/// Edges are numbered by sorted `(lo, hi)` vertex pairs and oriented from
/// `lo` to `hi`; faces likewise by sorted vertex triples.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub tets: Vec<[usize; 4]>,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<[usize; 3]>,
    pub tet_edges: Vec<[usize; 6]>,
    /// `+1` when the local edge direction agrees with the global one.
    pub tet_edge_signs: Vec<[f64; 6]>,
    pub tet_faces: Vec<[usize; 4]>,
    /// Number of tetrahedra sharing each face.
    pub face_incidence: Vec<u8>,
    /// Boundary triangles with outward orientation, as global vertex ids.
    pub boundary_tris: Vec<[usize; 3]>,
    /// Tetrahedron adjacent to each boundary triangle.
    pub boundary_tri_tets: Vec<usize>,
    pub geometry: Geometry,
}

fn sort3(mut f: [usize; 3]) -> [usize; 3] {
    f.sort_unstable();
    f
}

impl Mesh {
    /// Build topology from vertices and tetrahedra. Vertex order inside each
    /// tetrahedron is kept as given; orientation is checked by [`validate`].
    pub fn new(
        vertices: Vec<[f64; 3]>,
        tets: Vec<[usize; 4]>,
        geometry: Geometry,
    ) -> Result<Self, MeshError> {
        let nv = vertices.len();
        for (t, tet) in tets.iter().enumerate() {
            for &v in tet {
                if v >= nv {
                    return Err(MeshError::VertexOutOfRange { tet: t, vertex: v, n_vertices: nv });
                }
            }
            let mut s = *tet;
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(MeshError::RepeatedVertex { tet: t });
            }
        }

        let mut edges: Vec<[usize; 2]> = Vec::with_capacity(tets.len() * 6);
        let mut faces: Vec<[usize; 3]> = Vec::with_capacity(tets.len() * 4);
        for tet in &tets {
            for [a, b] in LOCAL_EDGES {
                let (x, y) = (tet[a], tet[b]);
                edges.push([x.min(y), x.max(y)]);
            }
            for f in LOCAL_FACES {
                faces.push(sort3([tet[f[0]], tet[f[1]], tet[f[2]]]));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        faces.sort_unstable();
        faces.dedup();

        let mut tet_edges = Vec::with_capacity(tets.len());
        let mut tet_edge_signs = Vec::with_capacity(tets.len());
        let mut tet_faces = Vec::with_capacity(tets.len());
        let mut face_incidence = vec![0u8; faces.len()];
        let mut face_owner = vec![usize::MAX; faces.len()];
        for (t, tet) in tets.iter().enumerate() {
            let mut ie = [0usize; 6];
            let mut se = [0.0; 6];
            for (k, [a, b]) in LOCAL_EDGES.iter().enumerate() {
                let (x, y) = (tet[*a], tet[*b]);
                ie[k] = edges.binary_search(&[x.min(y), x.max(y)]).unwrap();
                se[k] = if x < y { 1.0 } else { -1.0 };
            }
            let mut ifc = [0usize; 4];
            for (k, f) in LOCAL_FACES.iter().enumerate() {
                let key = sort3([tet[f[0]], tet[f[1]], tet[f[2]]]);
                let idx = faces.binary_search(&key).unwrap();
                ifc[k] = idx;
                face_incidence[idx] = face_incidence[idx].saturating_add(1);
                face_owner[idx] = face_owner[idx].min(t);
            }
            tet_edges.push(ie);
            tet_edge_signs.push(se);
            tet_faces.push(ifc);
        }

        let mut mesh = Mesh {
            vertices,
            tets,
            edges,
            faces,
            tet_edges,
            tet_edge_signs,
            tet_faces,
            face_incidence,
            boundary_tris: Vec::new(),
            boundary_tri_tets: Vec::new(),
            geometry,
        };
        mesh.collect_boundary();
        Ok(mesh)
    }

    fn collect_boundary(&mut self) {
        // boundary triangles in face order, oriented outward from the owning tet
        let mut tris = Vec::new();
        let mut owners = Vec::new();
        let mut found = vec![None; self.faces.len()];
        for (t, ifc) in self.tet_faces.iter().enumerate() {
            for (k, &f) in ifc.iter().enumerate() {
                if self.face_incidence[f] == 1 {
                    found[f] = Some((t, k));
                }
            }
        }
        for (f, hit) in found.into_iter().enumerate() {
            let Some((t, k)) = hit else { continue };
            debug_assert_eq!(self.face_incidence[f], 1);
            let tet = self.tets[t];
            let lf = LOCAL_FACES[k];
            let mut tri = [tet[lf[0]], tet[lf[1]], tet[lf[2]]];
            let opp = self.vertices[tet[k]];
            let n = tri_normal(&self.vertices, tri);
            let c = centroid3(&self.vertices, tri);
            if dot(n, sub(c, opp)) < 0.0 {
                tri.swap(1, 2);
            }
            tris.push(tri);
            owners.push(t);
        }
        self.boundary_tris = tris;
        self.boundary_tri_tets = owners;
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn n_tets(&self) -> usize {
        self.tets.len()
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&[a.min(b), a.max(b)]).ok()
    }

    pub fn face_index(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        self.faces.binary_search(&sort3([a, b, c])).ok()
    }

    /// Signed volume of tetrahedron `t`.
    pub fn tet_volume(&self, t: usize) -> f64 {
        signed_volume(&self.vertices, self.tets[t])
    }

    /// Longest edge length over the whole mesh.
    pub fn max_edge_length(&self) -> f64 {
        self.edges
            .iter()
            .map(|&[a, b]| norm(sub(self.vertices[a], self.vertices[b])))
            .fold(0.0, f64::max)
    }

    /// Vertices that lie on some boundary triangle.
    pub fn boundary_vertex_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.n_vertices()];
        for tri in &self.boundary_tris {
            for &v in tri {
                m[v] = true;
            }
        }
        m
    }

    /// Edges that lie on some boundary triangle.
    pub fn boundary_edge_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.n_edges()];
        for tri in &self.boundary_tris {
            for k in 0..3 {
                if let Some(e) = self.edge_index(tri[k], tri[(k + 1) % 3]) {
                    m[e] = true;
                }
            }
        }
        m
    }

    /// Relabel vertices by `perm` (new index = `perm[old]`). Tetrahedron
    /// orientation is preserved.
    pub fn renumbered(&self, perm: &[usize]) -> Result<Mesh, MeshError> {
        assert_eq!(perm.len(), self.n_vertices());
        let mut verts = vec![[0.0; 3]; self.n_vertices()];
        for (old, &new) in perm.iter().enumerate() {
            verts[new] = self.vertices[old];
        }
        let tets = self.tets.iter().map(|t| t.map(|v| perm[v])).collect();
        Mesh::new(verts, tets, self.geometry)
    }
}

pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn centroid3(v: &[[f64; 3]], t: [usize; 3]) -> [f64; 3] {
    scale(add(add(v[t[0]], v[t[1]]), v[t[2]]), 1.0 / 3.0)
}

/// Unnormalized normal `(x1 - x0) × (x2 - x0)` (twice the area).
pub(crate) fn tri_normal(v: &[[f64; 3]], t: [usize; 3]) -> [f64; 3] {
    cross(sub(v[t[1]], v[t[0]]), sub(v[t[2]], v[t[0]]))
}

pub(crate) fn signed_volume(v: &[[f64; 3]], t: [usize; 4]) -> f64 {
    let a = sub(v[t[1]], v[t[0]]);
    let b = sub(v[t[2]], v[t[0]]);
    let c = sub(v[t[3]], v[t[0]]);
    dot(a, cross(b, c)) / 6.0
}
