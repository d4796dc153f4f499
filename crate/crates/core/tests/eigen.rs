use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stekloff_core::eigen::{
    relative_residual, solve_dense_qz, solve_shift_invert, PairFlag, QzOptions, ShiftInvertOptions,
};
use stekloff_core::error::SolverError;
use stekloff_core::linalg::Triplets;
use stekloff_core::mesh::generate_cube;
use stekloff_core::operators::{build_original_pencil, build_schur_pencil, Domain, PencilKind};
use stekloff_core::{assemble_forms, CsrMatrix, MaterialSpec, Pencil, ZeroMean, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn dense(rows: &[&[C64]]) -> CsrMatrix<C64> {
    let mut t = Triplets::new(rows.len(), rows[0].len());
    for (i, r) in rows.iter().enumerate() {
        for (j, &v) in r.iter().enumerate() {
            if v != c(0.0, 0.0) {
                t.push(i, j, v);
            }
        }
    }
    t.to_csr()
}

fn cube2_original() -> Pencil {
    let f = assemble_forms(&generate_cube(2).unwrap(), &MaterialSpec::vacuum()).unwrap();
    build_original_pencil(&f, 1.0).unwrap()
}

fn sorted(mut v: Vec<C64>) -> Vec<C64> {
    v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
    v
}

#[test]
fn infinite_eigenvalue_is_flagged() {
    let z = c(0.0, 0.0);
    let p = Pencil::new(
        dense(&[&[c(1.0, 0.0), z], &[z, c(2.0, 0.0)]]),
        dense(&[&[c(1.0, 0.0), z], &[z, z]]),
        PencilKind::Original,
        Domain::Complex,
        1.0,
    )
    .unwrap();
    let s = solve_dense_qz(&p, &QzOptions::default()).unwrap();
    assert_eq!(s.count(PairFlag::Infinite), 1);
    let f = s.finite_values();
    assert_eq!(f.len(), 1);
    assert!((f[0] - c(1.0, 0.0)).norm() <= 1e-12);
}

#[test]
fn hermitian_pencil_has_real_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 12;
    let mut a = vec![vec![c(0.0, 0.0); n]; n];
    let mut b = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let x = c(rng.random::<f64>() - 0.5, if i == j { 0.0 } else { rng.random::<f64>() - 0.5 });
            a[i][j] = x;
            a[j][i] = x.conj();
        }
    }
    // PSD A1 of rank 8
    let v: Vec<Vec<C64>> = (0..8).map(|_| (0..n).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            b[i][j] = v.iter().map(|r| r[i] * r[j].conj()).sum();
        }
    }
    let ar: Vec<&[C64]> = a.iter().map(|r| r.as_slice()).collect();
    let br: Vec<&[C64]> = b.iter().map(|r| r.as_slice()).collect();
    let p = Pencil::new(dense(&ar), dense(&br), PencilKind::Original, Domain::Complex, 1.0).unwrap();
    let s = solve_dense_qz(&p, &QzOptions::default()).unwrap();
    let f = s.finite_values();
    assert_eq!(f.len(), 8);
    assert!(f.iter().all(|z| z.im.abs() <= 1e-10 * (1.0 + z.norm())));
}

#[test]
fn spectrum_is_invariant_under_renumbering() {
    let m = generate_cube(2).unwrap();
    let n = m.n_vertices();
    let perm: Vec<usize> = (0..n).map(|i| (i * 11 + 5) % n).collect();
    let r = m.renumbered(&perm).unwrap();
    let spec = MaterialSpec::vacuum();
    let a = solve_dense_qz(build_original_pencil(&assemble_forms(&m, &spec).unwrap(), 1.0).unwrap(), &QzOptions::default())
        .unwrap();
    let b = solve_dense_qz(build_original_pencil(&assemble_forms(&r, &spec).unwrap(), 1.0).unwrap(), &QzOptions::default())
        .unwrap();
    let (va, vb) = (sorted(a.finite_values()), sorted(b.finite_values()));
    assert_eq!(va.len(), vb.len());
    for (x, y) in va.iter().zip(&vb) {
        assert!((x - y).norm() <= 1e-10 * (1.0 + x.norm()), "{x} vs {y}");
    }
}

#[test]
fn shift_invert_matches_qz() {
    let p = cube2_original();
    let shift = c(1.3, 0.2);
    let qz = solve_dense_qz(&p, &QzOptions::default()).unwrap();
    let mut reference = qz.finite_values();
    reference.sort_by(|a, b| (a - shift).norm().partial_cmp(&(b - shift).norm()).unwrap());
    let si = solve_shift_invert(&p, &ShiftInvertOptions { shift, k: 10, ..Default::default() }).unwrap();
    let mut got = si.finite_values();
    got.sort_by(|a, b| (a - shift).norm().partial_cmp(&(b - shift).norm()).unwrap());
    assert_eq!(got.len(), 10);
    for (x, y) in got.iter().zip(&reference[..10]) {
        assert!((x - y).norm() <= 1e-8 * y.norm(), "{x} vs {y}");
    }
}

#[test]
fn shift_on_a_computed_eigenvalue_fails_to_factor() {
    let f = assemble_forms(&generate_cube(1).unwrap(), &MaterialSpec::vacuum()).unwrap();
    let p = build_schur_pencil(&f, 1.0, ZeroMean::default()).unwrap();
    let qz = solve_dense_qz(&p, &QzOptions::default()).unwrap();
    let lam = qz.finite_values()[0];
    let r = solve_shift_invert(&p, &ShiftInvertOptions { shift: lam, k: 2, ..Default::default() });
    assert!(matches!(r, Err(SolverError::Factorization(_))), "{:?}", r.map(|s| s.notes));
}

#[test]
fn truncation_note() {
    let f = assemble_forms(&generate_cube(1).unwrap(), &MaterialSpec::vacuum()).unwrap();
    let p = build_schur_pencil(&f, 1.0, ZeroMean::default()).unwrap();
    let finite = solve_dense_qz(&p, &QzOptions::default()).unwrap().count(PairFlag::Ok);
    let s = solve_shift_invert(&p, &ShiftInvertOptions { shift: c(1.0, 0.5), k: finite + 4, ..Default::default() }).unwrap();
    assert_eq!(s.finite_values().len(), finite);
    assert!(s.notes.iter().any(|n| n.contains(&format!("only {finite} finite"))));
}

#[test]
fn residual_properties() {
    let z = c(0.0, 0.0);
    let p = Pencil::new(
        dense(&[&[c(2.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(3.0, 0.0)]]),
        dense(&[&[c(1.0, 0.0), z], &[z, c(1.0, 0.0)]]),
        PencilKind::Original,
        Domain::Complex,
        1.0,
    )
    .unwrap();
    let (n0, n1) = (p.a0.norm_1(), p.a1.norm_1());
    // eigenpairs of [[2,1],[1,3]]: (5 ± √5)/2
    let l = (5.0 - 5f64.sqrt()) / 2.0;
    let x = vec![c(1.0, 0.0), c(l - 2.0, 0.0)];
    assert!(relative_residual(&p, c(l, 0.0), &x, n0, n1) <= 1e-14);

    let sol = solve_dense_qz(cube2_original(), &QzOptions::default()).unwrap();
    let big = build_original_pencil(&assemble_forms(&generate_cube(2).unwrap(), &MaterialSpec::vacuum()).unwrap(), 1.0).unwrap();
    let (n0, n1) = (big.a0.norm_1(), big.a1.norm_1());
    let pair = sol.pairs.iter().find(|q| q.flag == PairFlag::Ok).unwrap();
    let lam = pair.lambda.unwrap();
    assert!(relative_residual(&big, lam, &pair.vector, n0, n1) <= 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let noisy: Vec<C64> = pair.vector.iter().map(|v| v + c(1e-3 * (rng.random::<f64>() - 0.5), 0.0)).collect();
    let r0 = relative_residual(&big, lam, &noisy, n0, n1);
    assert!(r0 > 1e-6);
    let scaled: Vec<C64> = noisy.iter().map(|v| v * c(-3.0, 7.5)).collect();
    let r1 = relative_residual(&big, lam, &scaled, n0, n1);
    assert!((r0 - r1).abs() <= 1e-12 * r0);
}

#[test]
fn solvers_are_deterministic() {
    let p = cube2_original();
    let a = solve_dense_qz(&p, &QzOptions::default()).unwrap();
    let b = solve_dense_qz(&p, &QzOptions::default()).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    let o = ShiftInvertOptions { shift: c(2.0, 0.1), k: 4, seed: 9, ..Default::default() };
    let a = solve_shift_invert(&p, &o).unwrap();
    let b = solve_shift_invert(&p, &o).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
}
