use super::fields::{ScalarField, VectorField};
use super::quadrature::{gauss_legendre, tet_rule, triangle_rule};
use crate::mesh::{cross, dot, sub, Mesh};

/// Quadrature sizes used by the canonical interpolants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InterpolationRule {
    pub edge_points: usize,
    pub face_points: usize,
    pub volume_points: usize,
}

impl Default for InterpolationRule {
    fn default() -> Self {
        Self { edge_points: 5, face_points: 5, volume_points: 4 }
    }
}

/// Degrees of freedom of the four interpolants.
#[derive(Clone, Debug)]
pub struct Interpolants {
    /// Vertex values.
    pub nodal: Vec<f64>,
    /// Tangential line integrals along `lo -> hi`.
    pub edge: Vec<f64>,
    /// Fluxes through sorted faces `(a, b, c)` with normal `(b-a) x (c-a)`.
    pub face: Vec<f64>,
    /// Cell averages.
    pub volume: Vec<f64>,
}

fn lerp(bary: &[f64], pts: &[[f64; 3]]) -> [f64; 3] {
    let mut x = [0.0; 3];
    for (b, p) in bary.iter().zip(pts) {
        for d in 0..3 {
            x[d] += b * p[d];
        }
    }
    x
}

pub fn nodal(mesh: &Mesh, f: &dyn ScalarField) -> Vec<f64> {
    mesh.vertices.iter().map(|&x| f.value(x)).collect()
}

pub fn edge(mesh: &Mesh, u: &dyn VectorField, points: usize) -> Vec<f64> {
    let rule = gauss_legendre(points);
    mesh.edges
        .iter()
        .map(|&[a, b]| {
            let (xa, xb) = (mesh.vertices[a], mesh.vertices[b]);
            let t = sub(xb, xa);
            rule.iter().map(|&(s, w)| w * dot(u.value(lerp(&[1.0 - s, s], &[xa, xb])), t)).sum()
        })
        .collect()
}

pub fn face(mesh: &Mesh, u: &dyn VectorField, points: usize) -> Vec<f64> {
    let rule = triangle_rule(points);
    mesh.faces
        .iter()
        .map(|f| {
            let p = f.map(|v| mesh.vertices[v]);
            let n = cross(sub(p[1], p[0]), sub(p[2], p[0]));
            rule.iter().map(|(b, w)| w * dot(u.value(lerp(b, &p)), n)).sum()
        })
        .collect()
}

pub fn volume(mesh: &Mesh, f: &dyn ScalarField, points: usize) -> Vec<f64> {
    let rule = tet_rule(points);
    mesh.tets
        .iter()
        .map(|t| {
            let p = t.map(|v| mesh.vertices[v]);
            // weights sum to 1/6, so 6 * sum is the average
            6.0 * rule.iter().map(|(b, w)| w * f.value(lerp(b, &p))).sum::<f64>()
        })
        .collect()
}

/// Apply the nodal, edge, face and volume interpolants: `scalar` feeds the
/// nodal and volume maps, `vector` the edge and face maps.
pub fn canonical_interpolants(
    mesh: &Mesh,
    scalar: &dyn ScalarField,
    vector: &dyn VectorField,
    rule: InterpolationRule,
) -> Interpolants {
    Interpolants {
        nodal: nodal(mesh, scalar),
        edge: edge(mesh, vector, rule.edge_points),
        face: face(mesh, vector, rule.face_points),
        volume: volume(mesh, scalar, rule.volume_points),
    }
}
