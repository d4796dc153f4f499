use std::collections::HashMap;

use serde::Serialize;

use super::{centroid3, dot, norm, signed_volume, sub, tri_normal, Mesh};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Violation {
    NonPositiveVolume { tet: usize, volume: f64 },
    DuplicateTet { tet: usize, first: usize },
    CoincidentVertices { a: usize, b: usize },
    NonManifoldFace { face: [usize; 3], count: usize },
    InwardNormal { triangle: usize },
    /// A boundary edge not shared by exactly two boundary triangles.
    OpenSurface { edge: [usize; 2], count: usize },
    /// `V - E + F - T` disagrees with half the Euler characteristic of the boundary.
    EulerCharacteristic { volume: i64, boundary: i64 },
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check orientation, manifoldness, closedness of the stored boundary and
/// the Euler characteristic.
pub fn validate(mesh: &Mesh) -> ValidationReport {
    let mut v = Vec::new();
    let h = mesh.max_edge_length();
    for t in 0..mesh.n_tets() {
        let vol = signed_volume(&mesh.vertices, mesh.tets[t]);
        if vol <= 1e-14 * h * h * h {
            v.push(Violation::NonPositiveVolume { tet: t, volume: vol });
        }
    }

    let mut seen: HashMap<[usize; 4], usize> = HashMap::new();
    for (t, tet) in mesh.tets.iter().enumerate() {
        let mut k = *tet;
        k.sort_unstable();
        if let Some(&first) = seen.get(&k) {
            v.push(Violation::DuplicateTet { tet: t, first });
        } else {
            seen.insert(k, t);
        }
    }

    let mut order: Vec<usize> = (0..mesh.n_vertices()).collect();
    order.sort_by(|&a, &b| mesh.vertices[a].partial_cmp(&mesh.vertices[b]).unwrap());
    for w in order.windows(2) {
        if norm(sub(mesh.vertices[w[0]], mesh.vertices[w[1]])) <= 1e-12 * h {
            v.push(Violation::CoincidentVertices { a: w[0].min(w[1]), b: w[0].max(w[1]) });
        }
    }

    for (f, &c) in mesh.face_incidence.iter().enumerate() {
        if c > 2 {
            v.push(Violation::NonManifoldFace { face: mesh.faces[f], count: c as usize });
        }
    }

    for (i, (&tri, &t)) in mesh.boundary_tris.iter().zip(&mesh.boundary_tri_tets).enumerate() {
        let tet = mesh.tets[t];
        let Some(&opp) = tet.iter().find(|x| !tri.contains(x)) else { continue };
        let n = tri_normal(&mesh.vertices, tri);
        if dot(n, sub(centroid3(&mesh.vertices, tri), mesh.vertices[opp])) <= 0.0 {
            v.push(Violation::InwardNormal { triangle: i });
        }
    }

    let mut edge_count: HashMap<[usize; 2], usize> = HashMap::new();
    for tri in &mesh.boundary_tris {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            *edge_count.entry([a.min(b), a.max(b)]).or_default() += 1;
        }
    }
    let mut open: Vec<_> = edge_count.iter().filter(|(_, &c)| c != 2).collect();
    open.sort();
    for (&edge, &count) in open {
        v.push(Violation::OpenSurface { edge, count });
    }

    let mut bverts: Vec<usize> = mesh.boundary_tris.iter().flatten().copied().collect();
    bverts.sort_unstable();
    bverts.dedup();
    let chi_b = bverts.len() as i64 - edge_count.len() as i64 + mesh.boundary_tris.len() as i64;
    let chi_v = mesh.n_vertices() as i64 - mesh.n_edges() as i64 + mesh.n_faces() as i64
        - mesh.n_tets() as i64;
    if 2 * chi_v != chi_b {
        v.push(Violation::EulerCharacteristic { volume: chi_v, boundary: chi_b });
    }

    ValidationReport { violations: v }
}

#[cfg(test)]
mod tests {
    use super::super::{generate_ball, generate_cube};
    use super::*;

    #[test]
    fn generated_meshes_are_valid() {
        for n in 1..=3 {
            let r = validate(&generate_cube(n).unwrap());
            assert!(r.is_valid(), "{:?}", r.violations);
        }
        for l in 0..=2 {
            let r = validate(&generate_ball(1.0, l).unwrap());
            assert!(r.is_valid(), "{:?}", r.violations);
        }
    }

    #[test]
    fn flipped_tet_is_reported() {
        let mut m = generate_cube(2).unwrap();
        m.tets[5].swap(0, 1);
        let r = validate(&m);
        assert!(r.violations.contains(&Violation::NonPositiveVolume {
            tet: 5,
            volume: m.tet_volume(5)
        }));
    }

    #[test]
    fn deleted_boundary_triangle_opens_surface() {
        let mut m = generate_cube(2).unwrap();
        let tri = m.boundary_tris.remove(3);
        m.boundary_tri_tets.remove(3);
        let r = validate(&m);
        let open: Vec<_> = r
            .violations
            .iter()
            .filter_map(|x| match x {
                Violation::OpenSurface { edge, .. } => Some(*edge),
                _ => None,
            })
            .collect();
        assert_eq!(open.len(), 3);
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            assert!(open.contains(&[a.min(b), a.max(b)]));
        }
    }
}
