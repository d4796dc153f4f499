use super::{norm, scale, tri_normal, Mesh};
use crate::error::MeshError;

/// Boundary surface of a volume mesh, with its own node numbering.
#[derive(Clone, Debug)]
pub struct SurfaceMesh {
    /// Volume vertex id of each surface node, ascending.
    pub nodes: Vec<usize>,
    /// Surface node id of each volume vertex, if on the boundary.
    pub node_of_vertex: Vec<Option<usize>>,
    /// Outward-oriented triangles as volume vertex ids.
    pub triangles: Vec<[usize; 3]>,
    /// The same triangles as surface node ids.
    pub local_triangles: Vec<[usize; 3]>,
    pub normals: Vec<[f64; 3]>,
    pub areas: Vec<f64>,
    pub tri_tets: Vec<usize>,
    /// Volume edge ids lying on the surface, ascending.
    pub edges: Vec<usize>,
}

impl SurfaceMesh {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }
}

pub fn extract_boundary(mesh: &Mesh) -> Result<SurfaceMesh, MeshError> {
    for (f, &c) in mesh.face_incidence.iter().enumerate() {
        if c > 2 {
            return Err(MeshError::NonManifold { face: mesh.faces[f], count: c as usize });
        }
    }
    let mask = mesh.boundary_vertex_mask();
    let mut nodes = Vec::new();
    let mut node_of_vertex = vec![None; mesh.n_vertices()];
    for (v, &on) in mask.iter().enumerate() {
        if on {
            node_of_vertex[v] = Some(nodes.len());
            nodes.push(v);
        }
    }
    let triangles = mesh.boundary_tris.clone();
    let local_triangles = triangles.iter().map(|t| t.map(|v| node_of_vertex[v].unwrap())).collect();
    let mut normals = Vec::with_capacity(triangles.len());
    let mut areas = Vec::with_capacity(triangles.len());
    for &t in &triangles {
        let n = tri_normal(&mesh.vertices, t);
        let l = norm(n);
        normals.push(scale(n, 1.0 / l));
        areas.push(0.5 * l);
    }
    let emask = mesh.boundary_edge_mask();
    let edges = (0..mesh.n_edges()).filter(|&e| emask[e]).collect();
    Ok(SurfaceMesh {
        nodes,
        node_of_vertex,
        triangles,
        local_triangles,
        normals,
        areas,
        tri_tets: mesh.boundary_tri_tets.clone(),
        edges,
    })
}
