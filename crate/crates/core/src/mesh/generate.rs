use super::{refine_uniform, signed_volume, Geometry, Mesh};
use crate::error::MeshError;

/// Unit cube `[0,1]^3` split into `n^3` cells, each cut into six Kuhn
/// tetrahedra along the main diagonal.
pub fn generate_cube(n: usize) -> Result<Mesh, MeshError> {
    if n == 0 {
        return Err(MeshError::InvalidArgument("cube subdivision must be at least 1".into()));
    }
    let m = n + 1;
    let id = |i: usize, j: usize, k: usize| (i * m + j) * m + k;
    let h = 1.0 / n as f64;
    let mut verts = Vec::with_capacity(m * m * m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                verts.push([i as f64 * h, j as f64 * h, k as f64 * h]);
            }
        }
    }
    const PERMS: [[usize; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut tets = Vec::with_capacity(6 * n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for p in PERMS {
                    let mut c = [i, j, k];
                    let mut tet = [id(c[0], c[1], c[2]), 0, 0, 0];
                    for (s, &axis) in p.iter().enumerate() {
                        c[axis] += 1;
                        tet[s + 1] = id(c[0], c[1], c[2]);
                    }
                    if signed_volume(&verts, tet) < 0.0 {
                        tet.swap(2, 3);
                    }
                    tets.push(tet);
                }
            }
        }
    }
    Mesh::new(verts, tets, Geometry::Polyhedral)
}

/// Ball of the given radius: an octahedron of eight tetrahedra around the
/// center, uniformly refined `level` times with boundary vertices snapped
/// to the sphere.
pub fn generate_ball(radius: f64, level: usize) -> Result<Mesh, MeshError> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(MeshError::InvalidArgument(format!("ball radius {radius} must be positive")));
    }
    let r = radius;
    let verts = vec![
        [0.0, 0.0, 0.0],
        [r, 0.0, 0.0],
        [-r, 0.0, 0.0],
        [0.0, r, 0.0],
        [0.0, -r, 0.0],
        [0.0, 0.0, r],
        [0.0, 0.0, -r],
    ];
    let mut tets = Vec::with_capacity(8);
    for x in [1, 2] {
        for y in [3, 4] {
            for z in [5, 6] {
                let mut t = [0, x, y, z];
                if signed_volume(&verts, t) < 0.0 {
                    t.swap(2, 3);
                }
                tets.push(t);
            }
        }
    }
    let mut mesh = Mesh::new(verts, tets, Geometry::Ball { radius })?;
    for _ in 0..level {
        mesh = refine_uniform(&mesh)?;
    }
    Ok(mesh)
}
