use faer::{Mat, Side};
use serde::{Deserialize, Serialize};

use crate::error::AssemblyError;
use crate::linalg::C64;

pub type Tensor = [[C64; 3]; 3];

pub fn scalar_tensor(v: C64) -> Tensor {
    let z = C64::new(0.0, 0.0);
    [[v, z, z], [z, v, z], [z, z, v]]
}

/// Material coefficients as given by the user: either one tensor for the
/// whole mesh or one per tetrahedron.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TensorField {
    Uniform(Tensor),
    PerTet(Vec<Tensor>),
}

impl TensorField {
    pub fn at(&self, t: usize) -> &Tensor {
        match self {
            TensorField::Uniform(m) => m,
            TensorField::PerTet(v) => &v[t],
        }
    }

    fn each(&self) -> Box<dyn Iterator<Item = (String, &Tensor)> + '_> {
        match self {
            TensorField::Uniform(m) => Box::new(std::iter::once(("every tetrahedron".to_string(), m))),
            TensorField::PerTet(v) => Box::new(v.iter().enumerate().map(|(t, m)| (format!("tet {t}"), m))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaterialSpec {
    pub eps: TensorField,
    pub mu_inv: TensorField,
}

impl MaterialSpec {
    /// Vacuum-like material with scalar `eps` and `mu`.
    pub fn scalar(eps: C64, mu: C64) -> Self {
        Self {
            eps: TensorField::Uniform(scalar_tensor(eps)),
            mu_inv: TensorField::Uniform(scalar_tensor(C64::new(1.0, 0.0) / mu)),
        }
    }

    pub fn vacuum() -> Self {
        Self::scalar(C64::new(1.0, 0.0), C64::new(1.0, 0.0))
    }
}

/// Coercivity constants `(c_eps, c_mu)` of a specification, or the first
/// violated condition.
pub fn validate_materials(spec: &MaterialSpec, n_tets: usize) -> Result<(f64, f64), AssemblyError> {
    let m = Material::new(spec.clone(), n_tets)?;
    Ok((m.c_eps, m.c_mu))
}

/// Validated material data.
#[derive(Clone, Debug)]
pub struct Material {
    pub spec: MaterialSpec,
    /// Minimum eigenvalue of the Hermitian part of `eps` over all cells.
    pub c_eps: f64,
    /// Minimum eigenvalue of the Hermitian part of `mu^{-1}`.
    pub c_mu: f64,
    pub hermitian: bool,
}

fn herm_parts(m: &Tensor) -> (Mat<C64>, Mat<C64>) {
    let re = Mat::from_fn(3, 3, |i, j| (m[i][j] + m[j][i].conj()) * 0.5);
    let im = Mat::from_fn(3, 3, |i, j| (m[i][j] - m[j][i].conj()) * C64::new(0.0, -0.5));
    (re, im)
}

fn eig_range(m: &Mat<C64>) -> (f64, f64) {
    let v = m.self_adjoint_eigenvalues(Side::Lower).expect("3x3 hermitian eigenvalues");
    (v[0], v[2])
}

const PASSIVITY_TOL: f64 = 1e-12;

impl Material {
    /// Check coercivity of the real parts and passivity of the imaginary
    /// parts (`Im eps >= 0`, `Im mu^{-1} <= 0`).
    pub fn new(spec: MaterialSpec, n_tets: usize) -> Result<Self, AssemblyError> {
        for (name, f) in [("eps", &spec.eps), ("mu_inv", &spec.mu_inv)] {
            if let TensorField::PerTet(v) = f {
                if v.len() != n_tets {
                    return Err(AssemblyError::Material(format!(
                        "{name} has {} entries for {n_tets} tetrahedra",
                        v.len()
                    )));
                }
            }
        }
        let mut c_eps = f64::INFINITY;
        let mut hermitian = true;
        for (location, m) in spec.eps.each() {
            let (re, im) = herm_parts(m);
            let (lo, _) = eig_range(&re);
            let (ilo, ihi) = eig_range(&im);
            if ilo < -PASSIVITY_TOL {
                let detail = format!("Im eps has eigenvalue {ilo:e}, need 0 <= Im(ξ^H eps ξ)");
                return Err(AssemblyError::NonPassiveMaterial { location, detail });
            }
            if !(lo > 0.0) {
                return Err(AssemblyError::NotCoercive { location, field: "eps", value: lo });
            }
            c_eps = c_eps.min(lo);
            hermitian &= ilo.abs().max(ihi.abs()) <= PASSIVITY_TOL;
        }
        let mut c_mu = f64::INFINITY;
        for (location, m) in spec.mu_inv.each() {
            let (re, im) = herm_parts(m);
            let (lo, _) = eig_range(&re);
            let (ilo, ihi) = eig_range(&im);
            if ihi > PASSIVITY_TOL {
                let detail = format!("Im mu^-1 has eigenvalue {ihi:e}, need Im(ξ^H mu^-1 ξ) <= 0");
                return Err(AssemblyError::NonPassiveMaterial { location, detail });
            }
            if !(lo > 0.0) {
                return Err(AssemblyError::NotCoercive { location, field: "mu_inv", value: lo });
            }
            c_mu = c_mu.min(lo);
            hermitian &= ilo.abs().max(ihi.abs()) <= PASSIVITY_TOL;
        }
        Ok(Self { spec, c_eps, c_mu, hermitian })
    }

    pub fn eps(&self, t: usize) -> &Tensor {
        self.spec.eps.at(t)
    }

    pub fn mu_inv(&self, t: usize) -> &Tensor {
        self.spec.mu_inv.at(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coercivity_constant() {
        let mut t = scalar_tensor(C64::new(2.0, 0.0));
        t[0][1] = C64::new(0.5, 0.5);
        t[1][0] = C64::new(0.5, -0.5);
        let spec = MaterialSpec { eps: TensorField::Uniform(t), mu_inv: MaterialSpec::vacuum().mu_inv };
        let m = Material::new(spec, 1).unwrap();
        assert!((m.c_eps - (2.0 - 0.5f64.sqrt())).abs() < 1e-14);
        assert!(m.hermitian);
    }

    #[test]
    fn rejects_active_and_indefinite() {
        let active = MaterialSpec::scalar(C64::new(1.0, -0.1), C64::new(1.0, 0.0));
        assert!(matches!(Material::new(active, 1), Err(AssemblyError::NonPassiveMaterial { .. })));
        let lossy = MaterialSpec::scalar(C64::new(1.0, 0.1), C64::new(1.0, 0.0));
        assert!(!Material::new(lossy, 1).unwrap().hermitian);
        let neg = MaterialSpec::scalar(C64::new(-1.0, 0.0), C64::new(1.0, 0.0));
        assert!(matches!(Material::new(neg, 1), Err(AssemblyError::NotCoercive { .. })));
    }
}
