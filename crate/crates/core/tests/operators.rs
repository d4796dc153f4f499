use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stekloff_core::linalg::dense::eigenvalues_hermitian;
use stekloff_core::mesh::{generate_ball, generate_cube, Mesh};
use stekloff_core::operators::{
    build_aux_pencil, build_original_pencil, build_schur_pencil, check_kappa, interior_resonances, DiscreteS,
};
use stekloff_core::{assemble_forms, Forms, MaterialSpec, ZeroMean, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn vacuum(m: &Mesh) -> Forms {
    assemble_forms(m, &MaterialSpec::vacuum()).unwrap()
}

fn random(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect()
}

fn norm(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

#[test]
fn original_pencil_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = generate_cube(2).unwrap();
    let f = vacuum(&m);
    let p = build_original_pencil(&f, 1.3).unwrap();
    let x = random(&mut rng, m.n_edges());
    let a = p.eval(c(0.0, 0.0)).mul_vec(&x);
    let k = f.helmholtz(1.3).mul_vec(&x);
    assert!(a.iter().zip(&k).all(|(u, v)| (u - v).norm() <= 1e-14));

    let bmask = m.boundary_edge_mask();
    let interior: Vec<C64> = x.iter().zip(&bmask).map(|(v, &b)| if b { c(0.0, 0.0) } else { *v }).collect();
    assert!(p.a1.mul_vec(&interior).iter().all(|v| v.norm() == 0.0));
    assert!(p.hermitian);
    assert!(p.a0.hermitian_defect() <= 1e-12 * p.a0.max_abs());
    assert!(build_original_pencil(&f, 0.0).is_err());
}

#[test]
fn aux_pencils() {
    let m = generate_cube(2).unwrap();
    let f = vacuum(&m);
    let a1 = build_aux_pencil(&f, 1.0, 1, ZeroMean::default()).unwrap();
    let at = a1.pencil.eval(c(2.7, 0.0));
    assert!(at.hermitian_defect() <= 1e-12 * at.max_abs());

    // l = 0 at λ = 0 is block lower triangular with the K block in the corner
    let a0 = build_aux_pencil(&f, 1.0, 0, ZeroMean::default()).unwrap();
    let z = a0.pencil.eval(c(0.0, 0.0));
    let n = a0.n_u;
    for (i, j, v) in z.triplets() {
        if i < n && j >= n {
            assert_eq!(v, c(0.0, 0.0));
        }
        if i < n && j < n {
            assert_eq!(v, f.helmholtz(1.0).get(i, j));
        }
    }
    assert!(build_aux_pencil(&f, 1.0, 2, ZeroMean::default()).is_err());
}

#[test]
fn s_annihilates_gradients_and_satisfies_the_pairing_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for m in [generate_cube(2).unwrap(), generate_ball(1.0, 1).unwrap()] {
        let f = vacuum(&m);
        for mode in [ZeroMean::default(), ZeroMean::Deflation] {
            let s = DiscreteS::new(&f, mode).unwrap();
            let p: Vec<C64> = random(&mut rng, m.n_vertices());
            let gp = f.grad.to_complex().mul_vec(&p);
            assert!(norm(&s.apply_sn(&gp)) <= 1e-12 * norm(&p));

            let u = random(&mut rng, m.n_edges());
            let u2 = random(&mut rng, m.n_edges());
            let z = s.apply_sn(&u);
            let z2 = s.apply_sn(&u2);
            let lhs = dot(&z, &f.lap_bnd.to_complex().mul_vec(&z2));
            let rhs = -dot(&z, &f.coupling.to_complex().mul_vec_transpose(&u2));
            // with γ > 0 the pairing picks up γ <z, z'>, which is O(γ) small
            let g = s.gamma().unwrap_or(0.0);
            let extra = g * dot(&z, &f.mass_bnd.to_complex().mul_vec(&z2));
            assert!((lhs + extra - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
            if mode == ZeroMean::Deflation {
                assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
                assert!(s.boundary_mean(&z).norm() <= 1e-12 * norm(&z));
            }
        }
    }
}

#[test]
fn gamma_perturbation_is_first_order() {
    // z(γ) - z(0) = O(γ): three decades of γ give three decades of change
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = generate_cube(2).unwrap();
    let f = vacuum(&m);
    let u = random(&mut rng, m.n_edges());
    let exact = DiscreteS::new(&f, ZeroMean::Deflation).unwrap().apply_sn(&u);
    let gap = |g: f64| {
        let z = DiscreteS::new(&f, ZeroMean::Gamma(Some(g))).unwrap().apply_sn(&u);
        let d: Vec<C64> = z.iter().zip(&exact).map(|(a, b)| a - b).collect();
        norm(&d) / norm(&exact)
    };
    let (g2, g5) = (gap(1e-2), gap(1e-5));
    assert!(g2 < 1e-2, "gap at 1e-2: {g2:e}");
    let ratio = g2 / g5;
    assert!((300.0..3000.0).contains(&ratio), "ratio {ratio}");
    assert!(DiscreteS::new(&f, ZeroMean::Gamma(Some(0.0))).is_err());
}

#[test]
fn compliance_is_psd_and_kills_gradients() {
    let m = generate_cube(2).unwrap();
    let f = vacuum(&m);
    let p = build_schur_pencil(&f, 1.0, ZeroMean::default()).unwrap();
    let cmat = &p.a1;
    let cgm = cmat.to_dense() * f.grad.to_complex().to_dense();
    let worst = (0..cgm.nrows())
        .flat_map(|i| (0..cgm.ncols()).map(move |j| (i, j)))
        .map(|(i, j)| cgm[(i, j)].norm())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-12, "|C G| = {worst:e}");
    let ev = eigenvalues_hermitian(cmat.to_dense().as_ref()).unwrap();
    let top = ev.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    assert!(ev.iter().all(|&v| v >= -1e-12 * top));
}

#[test]
fn kappa_warning() {
    let m = generate_cube(2).unwrap();
    let f = vacuum(&m);
    let quiet = check_kappa(&f, 1e-3);
    assert!(quiet.warning.is_none(), "{:?}", quiet);
    let w = interior_resonances(&f, 1).unwrap()[0];
    let loud = check_kappa(&f, w);
    assert!(loud.warning.is_some(), "{:?}", loud);

    // eps -> 4 eps together with omega -> omega / 2 leaves K unchanged
    let f4 = assemble_forms(&m, &MaterialSpec::scalar(c(4.0, 0.0), c(1.0, 0.0))).unwrap();
    for omega in [1e-3, w] {
        let a = check_kappa(&f, omega);
        let b = check_kappa(&f4, omega / 2.0);
        assert_eq!(a.warning.is_some(), b.warning.is_some());
        assert!((a.relative - b.relative).abs() <= 1e-6 * a.relative.max(1e-300) + 1e-14);
    }
}
