use stekloff_core::mesh::io::{mesh_from_json, mesh_to_json, mesh_to_msh, parse_msh, read_json, read_msh, write_json};
use stekloff_core::mesh::{extract_boundary, generate_ball, generate_cube, refine_uniform, validate, Mesh};

fn euler(m: &Mesh) -> i64 {
    m.n_vertices() as i64 - m.n_edges() as i64 + m.n_faces() as i64 - m.n_tets() as i64
}

fn volume(m: &Mesh) -> f64 {
    (0..m.n_tets()).map(|t| m.tet_volume(t)).sum()
}

#[test]
fn cube_entity_counts() {
    let m = generate_cube(1).unwrap();
    assert_eq!((m.n_vertices(), m.n_tets(), m.n_edges(), m.boundary_tris.len()), (8, 6, 19, 12));
    assert_eq!(m.n_faces(), 18);
    assert_eq!(euler(&m), 1);
    let m = generate_cube(2).unwrap();
    assert_eq!((m.n_vertices(), m.n_tets()), (27, 48));
    assert_eq!(euler(&m), 1);
}

#[test]
fn ball_levels() {
    let b0 = generate_ball(1.0, 0).unwrap();
    assert_eq!(euler(&b0), 1);
    let s = extract_boundary(&b0).unwrap();
    for &v in &s.nodes {
        let r = b0.vertices[v].iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((r - 1.0).abs() <= 1e-14);
    }
    let b1 = generate_ball(1.0, 1).unwrap();
    let b2 = generate_ball(1.0, 2).unwrap();
    assert_eq!(b2.boundary_tris.len(), 4 * b1.boundary_tris.len());
    assert_eq!(euler(&b2), 1);
}

#[test]
fn refinement_counts_and_volume() {
    let c1 = generate_cube(1).unwrap();
    let r = refine_uniform(&c1).unwrap();
    assert_eq!(r.n_tets(), 48);
    assert_eq!(r.n_vertices(), 8 + 19);
    assert!((volume(&r) - 1.0).abs() <= 1e-12);
    let rr = refine_uniform(&r).unwrap();
    let c4 = generate_cube(4).unwrap();
    assert_eq!(
        (rr.n_vertices(), rr.n_edges(), rr.n_faces(), rr.n_tets(), rr.boundary_tris.len()),
        (c4.n_vertices(), c4.n_edges(), c4.n_faces(), c4.n_tets(), c4.boundary_tris.len())
    );
    assert!(validate(&rr).is_valid());
}

#[test]
fn surface_areas() {
    let s = extract_boundary(&generate_cube(1).unwrap()).unwrap();
    assert_eq!(s.n_triangles(), 12);
    assert!((s.total_area() - 6.0).abs() <= 1e-12);

    let four_pi = 4.0 * std::f64::consts::PI;
    let mut last = 0.0;
    for l in 0..=3 {
        let a = extract_boundary(&generate_ball(1.0, l).unwrap()).unwrap().total_area();
        assert!(a > last && a < four_pi, "level {l}: area {a}");
        last = a;
    }
}

#[test]
fn surface_is_closed() {
    for m in [generate_cube(2).unwrap(), generate_ball(1.0, 1).unwrap()] {
        let s = extract_boundary(&m).unwrap();
        let mut count = std::collections::HashMap::new();
        for t in &s.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                *count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        assert!(count.values().all(|&c| c == 2));
        assert_eq!(count.len(), s.edges.len());
        for n in &s.normals {
            assert!((n.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs() <= 1e-12);
        }
        assert!(s.areas.iter().all(|&a| a > 0.0));
    }
}

#[test]
fn json_and_msh_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let m = generate_ball(1.0, 1).unwrap();
    let path = dir.path().join("ball.json");
    write_json(&m, &path).unwrap();
    let back = read_json(&path).unwrap();
    assert_eq!(mesh_to_json(&back), mesh_to_json(&m));
    assert_eq!(mesh_to_json(&mesh_from_json(&mesh_to_json(&m)).unwrap()), mesh_to_json(&m));

    let c = generate_cube(1).unwrap();
    let path = dir.path().join("cube.msh");
    std::fs::write(&path, mesh_to_msh(&c)).unwrap();
    let back = read_msh(&path).unwrap();
    assert_eq!((back.n_tets(), back.n_vertices()), (6, 8));
    assert_eq!(back.vertices, c.vertices);
    assert_eq!(back.edges, c.edges);
}

#[test]
fn msh_rejects_second_order_tets() {
    let text = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n1\n1 0 0 0\n$EndNodes\n$Elements\n1\n1 11 2 0 1 1 1 1 1 1 1 1 1 1 1\n$EndElements\n";
    let err = parse_msh(text).unwrap_err().to_string();
    assert!(err.contains("11"), "{err}");
}

#[test]
fn renumbering_preserves_geometry() {
    let m = generate_cube(2).unwrap();
    let n = m.n_vertices();
    let perm: Vec<usize> = (0..n).map(|i| (i * 7 + 3) % n).collect();
    let r = m.renumbered(&perm).unwrap();
    assert_eq!((r.n_edges(), r.n_faces(), r.n_tets()), (m.n_edges(), m.n_faces(), m.n_tets()));
    assert!((volume(&r) - volume(&m)).abs() <= 1e-12);
    assert!(validate(&r).is_valid());
    assert!(m.renumbered(&vec![0; n]).is_err());
}
