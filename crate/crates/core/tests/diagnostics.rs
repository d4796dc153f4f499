use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stekloff_core::diagnostics::{
    build_decomposition, build_t, commuting_diagram_defect, compatibility_defect, inf_sup_constant, nested_prolongation,
    trace_commutation_defect, DecompositionKind, NestedHierarchy, TVariant,
};
use stekloff_core::fem::fields::{FnScalar, FnVector};
use stekloff_core::fem::InterpolationRule;
use stekloff_core::mesh::{generate_cube, Mesh};
use stekloff_core::operators::{build_original_pencil, Domain, PencilKind};
use stekloff_core::{assemble_forms, CsrMatrix, Forms, MaterialSpec, Pencil, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn vacuum(m: &Mesh) -> Forms {
    assemble_forms(m, &MaterialSpec::vacuum()).unwrap()
}

fn random(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect()
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn column(m: &faer::Mat<f64>, j: usize) -> Vec<f64> {
    (0..m.nrows()).map(|i| m[(i, j)]).collect()
}

fn quad(a: &CsrMatrix<f64>, x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(a.mul_vec(y)).map(|(p, q)| p * q).sum()
}

#[test]
fn decomposition_dimensions_and_structure() {
    let f = vacuum(&generate_cube(2).unwrap());
    let orig = build_decomposition(&f, DecompositionKind::Original).unwrap();
    let w1 = orig.w1.as_ref().unwrap();
    assert_eq!((orig.w.dim(), w1.dim()), (1, 25));
    let modified = build_decomposition(&f, DecompositionKind::Modified).unwrap();
    assert_eq!(modified.w.dim(), 26);

    let kc = f.curl_curl.map(|v| v.re);
    for j in 0..w1.dim() {
        let b = column(w1.basis(), j);
        assert!(quad(&kc, &b, &b).abs() <= 1e-12);
        for k in 0..orig.w.dim() {
            let b2 = column(orig.w.basis(), k);
            assert!(quad(&f.mass_l2, &b, &b2).abs() <= 1e-10);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..5 {
        let x = random(&mut rng, f.dofs.n_edges);
        let px = modified.w.apply(&x);
        assert!(max_diff(&modified.w.apply(&px), &px) <= 1e-10);
        // V ⊕ W1 ⊕ W2 reassembles x
        let mut sum = orig.apply_v(&x);
        for (s, (a, b)) in sum.iter_mut().zip(w1.apply(&x).into_iter().zip(orig.w.apply(&x))) {
            *s += a + b;
        }
        assert!(max_diff(&sum, &x) <= 1e-12);
    }
}

#[test]
fn t_operator_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = generate_cube(2).unwrap();
    let f = vacuum(&m);
    let orig = build_decomposition(&f, DecompositionKind::Original).unwrap();
    for lam in [c(1.0, 0.0), c(0.0, -1.0), c(3.0, 2.0)] {
        let t = build_t(&orig, lam, 1.0, TVariant::Original).unwrap();
        let x = random(&mut rng, orig.dim());
        assert!(max_diff(&t.apply(&t.apply_inverse(&x)), &x) <= 1e-10);
    }

    let modified = build_decomposition(&f, DecompositionKind::Modified).unwrap();
    let t = build_t(&modified, c(0.0, -1.0), 1.0, TVariant::Modified).unwrap();
    let p = random(&mut rng, m.n_vertices());
    let gp = f.grad.to_complex().mul_vec(&p);
    let tg = t.apply(&gp);
    assert!(tg.iter().zip(&gp).all(|(a, b)| (a + b).norm() <= 1e-10 * (1.0 + b.norm())));
    assert!(build_t(&orig, c(1.0, 0.0), 1.0, TVariant::Modified).is_err());
}

#[test]
fn inf_sup_of_the_gram_pencil_is_one() {
    let f = vacuum(&generate_cube(2).unwrap());
    let dec = build_decomposition(&f, DecompositionKind::Modified).unwrap();
    let n = dec.dim();
    let p = Pencil::new(dec.gram.to_complex(), CsrMatrix::zeros(n, n), PencilKind::Original, Domain::Complex, 1.0).unwrap();
    let t = build_t(&dec, c(0.7, -0.2), 1.0, TVariant::Identity).unwrap();
    let beta = inf_sup_constant(&p, &t, &dec.gram).unwrap();
    assert!((beta - 1.0).abs() <= 1e-10, "{beta}");
}

#[test]
fn original_problem_loses_stability_at_zero_without_t() {
    let h = NestedHierarchy::new(generate_cube(1).unwrap(), 2).unwrap();
    let betas: Vec<f64> = h
        .meshes
        .iter()
        .map(|m| {
            let f = vacuum(m);
            let dec = build_decomposition(&f, DecompositionKind::Original).unwrap();
            let p = build_original_pencil(&f, 1.0).unwrap();
            let t = build_t(&dec, c(0.0, 0.0), 1.0, TVariant::Identity).unwrap();
            inf_sup_constant(&p, &t, &dec.gram).unwrap()
        })
        .collect();
    assert!(betas.windows(2).all(|w| w[1] < 0.8 * w[0]), "{betas:?}");
}

#[test]
fn compatibility_defect_on_nested_cubes() {
    // The first step from cube 1 is pre-asymptotic; from cube 2 on the
    // modified defect decreases.
    let h = NestedHierarchy::new(generate_cube(2).unwrap(), 2).unwrap();
    let forms: Vec<Forms> = h.meshes.iter().map(vacuum).collect();
    let d: Vec<f64> = (0..2)
        .map(|l| {
            let p = nested_prolongation(&h, l, l + 1);
            compatibility_defect(&forms[l], &forms[l + 1], &p, 1.0, DecompositionKind::Modified, None).unwrap()
        })
        .collect();
    assert!(d[1] < d[0], "{d:?}");
    assert!(d.iter().all(|&v| v > 0.0 && v < 1.0));
    let p = nested_prolongation(&h, 0, 1);
    assert!(compatibility_defect(&forms[0], &forms[1], &p, 1.0, DecompositionKind::Original, None).is_err());
}

#[test]
fn commuting_defects_for_smooth_fields() {
    let rule = InterpolationRule::default();
    let scalar = FnScalar {
        value: Box::new(|x| x[0].sin() * x[2].cos()),
        grad: Box::new(|x| [x[0].cos() * x[2].cos(), 0.0, -x[0].sin() * x[2].sin()]),
    };
    let field = || FnVector {
        value: Box::new(|x| [x[1].sin(), 0.0, 0.0]),
        curl: Box::new(|x| [0.0, 0.0, -x[1].cos()]),
        div: Box::new(|_| 0.0),
    };
    let m = generate_cube(2).unwrap();
    let d = commuting_diagram_defect(&m, &scalar, &field(), rule);
    assert!(d.gradient <= 1e-8 && d.curl <= 1e-8, "{d:?}");

    let trace: Vec<f64> = (1..=3)
        .map(|n| {
            let m = generate_cube(n).unwrap();
            trace_commutation_defect(&m, &vacuum(&m), &field(), rule).unwrap()
        })
        .collect();
    assert!(trace.windows(2).all(|w| w[1] < w[0]), "{trace:?}");
}
