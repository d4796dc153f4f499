use crate::mesh::{Mesh, SurfaceMesh};

/// Degree-of-freedom layout: one unknown per edge (Nédélec) and per
/// boundary node (surface Lagrange).
#[derive(Clone, Debug)]
pub struct Dofs {
    pub n_edges: usize,
    pub n_vertices: usize,
    pub n_faces: usize,
    pub n_boundary_nodes: usize,
    /// Volume vertex id of each boundary node.
    pub boundary_nodes: Vec<usize>,
    /// Volume vertex ids of interior vertices, ascending.
    pub interior_nodes: Vec<usize>,
    /// Edge ids on the boundary, ascending.
    pub boundary_edges: Vec<usize>,
}

impl Dofs {
    pub fn new(mesh: &Mesh, surface: &SurfaceMesh) -> Self {
        let interior_nodes =
            (0..mesh.n_vertices()).filter(|&v| surface.node_of_vertex[v].is_none()).collect();
        Self {
            n_edges: mesh.n_edges(),
            n_vertices: mesh.n_vertices(),
            n_faces: mesh.n_faces(),
            n_boundary_nodes: surface.n_nodes(),
            boundary_nodes: surface.nodes.clone(),
            interior_nodes,
            boundary_edges: surface.edges.clone(),
        }
    }
}
