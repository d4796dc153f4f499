use serde::{Deserialize, Serialize};

use super::surface::{DiscreteS, ZeroMean};
use crate::error::{Error, SolverError};
use crate::fem::Forms;
use crate::linalg::{CsrMatrix, Triplets, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PencilKind {
    Original,
    Schur,
    Auxiliary { l: u8 },
}

/// Region of the complex plane where eigenvalues of the pencil are
/// meaningful.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Complex,
    /// `lambda = 0` is excluded; zero eigenvalues are artifacts of the
    /// formulation.
    PuncturedPlane,
}

/// Linear pencil `A0 - lambda A1`.
#[derive(Clone, Debug)]
pub struct Pencil {
    pub a0: CsrMatrix<C64>,
    pub a1: CsrMatrix<C64>,
    pub kind: PencilKind,
    pub domain: Domain,
    /// Both matrices Hermitian (real materials).
    pub hermitian: bool,
    pub omega: f64,
}

impl Pencil {
    pub fn new(
        a0: CsrMatrix<C64>,
        a1: CsrMatrix<C64>,
        kind: PencilKind,
        domain: Domain,
        omega: f64,
    ) -> Result<Self, SolverError> {
        let n = a0.nrows();
        if a0.ncols() != n || a1.nrows() != n || a1.ncols() != n {
            return Err(SolverError::Dimension(format!(
                "A0 is {}x{}, A1 is {}x{}",
                a0.nrows(),
                a0.ncols(),
                a1.nrows(),
                a1.ncols()
            )));
        }
        let scale = a0.max_abs().max(a1.max_abs()).max(f64::MIN_POSITIVE);
        let hermitian =
            a0.hermitian_defect() <= 1e-13 * scale && a1.hermitian_defect() <= 1e-13 * scale;
        Ok(Self { a0, a1, kind, domain, hermitian, omega })
    }

    pub fn dim(&self) -> usize {
        self.a0.nrows()
    }

    /// `A0 - lambda A1`.
    pub fn eval(&self, lambda: C64) -> CsrMatrix<C64> {
        self.a0.lin_comb(C64::new(1.0, 0.0), &self.a1, -lambda)
    }
}

/// Two-field pencil over edge unknowns `u` and boundary unknowns `z`.
#[derive(Clone, Debug)]
pub struct BlockPencil {
    pub pencil: Pencil,
    pub n_u: usize,
    pub n_z: usize,
    pub l: u8,
    /// Regularization used, or `None` when deflated.
    pub gamma: Option<f64>,
    /// Boundary Laplacian block in the `z` coordinates actually used.
    pub lap: CsrMatrix<f64>,
    /// Map from `z` coordinates to boundary nodal values.
    pub z_basis: CsrMatrix<f64>,
}

impl AsRef<Pencil> for Pencil {
    fn as_ref(&self) -> &Pencil {
        self
    }
}

impl AsRef<Pencil> for BlockPencil {
    fn as_ref(&self) -> &Pencil {
        &self.pencil
    }
}

/// `A(lambda) = K - lambda M_t` with `K = K_c - omega^2 M_eps`.
pub fn build_original_pencil(forms: &Forms, omega: f64) -> Result<Pencil, Error> {
    check_omega(omega)?;
    Ok(Pencil::new(
        forms.helmholtz(omega),
        forms.mass_t.to_complex(),
        PencilKind::Original,
        Domain::Complex,
        omega,
    )?)
}

/// `K - lambda C` with the compliance `C = B L_eff^{-1} B^T`.
pub fn build_schur_pencil(forms: &Forms, omega: f64, mode: ZeroMean) -> Result<Pencil, Error> {
    check_omega(omega)?;
    let s = DiscreteS::new(forms, mode)?;
    let c = s.compliance(&forms.dofs.boundary_edges);
    Ok(Pencil::new(forms.helmholtz(omega), c, PencilKind::Schur, Domain::Complex, omega)?)
}

/// Mean-zero basis `q_k = e_k - (m_k / m_last) e_last`, where `m = M 1`.
fn mean_zero_basis(forms: &Forms) -> CsrMatrix<f64> {
    let nb = forms.dofs.n_boundary_nodes;
    let m = forms.mass_bnd.mul_vec(&vec![1.0; nb]);
    let last = nb - 1;
    let mut t = Triplets::new(nb, last);
    for k in 0..last {
        t.push(k, k, 1.0);
        t.push(last, k, -m[k] / m[last]);
    }
    t.to_csr()
}

/// Auxiliary two-field pencil. For `l = 0`:
/// `A0 = [[K, 0], [B^T, L]]`, `A1 = [[0, -B], [0, 0]]`;
/// for `l = 1`: `A0 = [[K, 0], [0, 0]]`, `A1 = [[0, -B], [-B^T, -L]]`.
pub fn build_aux_pencil(
    forms: &Forms,
    omega: f64,
    l: u8,
    mode: ZeroMean,
) -> Result<BlockPencil, Error> {
    check_omega(omega)?;
    if l > 1 {
        return Err(Error::Config(format!("auxiliary exponent must be 0 or 1, got {l}")));
    }
    let nb = forms.dofs.n_boundary_nodes;
    let gamma = mode.resolve_gamma(&forms.lap_bnd);
    let (z_basis, lap) = match gamma {
        Some(g) => {
            if !(g > 0.0) {
                return Err(Error::Config(format!("gamma must be positive, got {g}")));
            }
            (CsrMatrix::identity(nb, 1.0), forms.lap_bnd.lin_comb(1.0, &forms.mass_bnd, g))
        }
        None => {
            let q = mean_zero_basis(forms);
            let lq = q.transpose().matmul(&forms.lap_bnd).matmul(&q);
            (q, lq)
        }
    };
    let b = forms.coupling.matmul(&z_basis);
    let nu = forms.dofs.n_edges;
    let nz = z_basis.ncols();
    let n = nu + nz;
    let k = forms.helmholtz(omega);
    let one = C64::new(1.0, 0.0);
    let bc = b.to_complex();
    let btc = b.transpose().to_complex();
    let lc = lap.to_complex();

    let mut t0 = Triplets::new(n, n);
    let mut t1 = Triplets::new(n, n);
    k.push_into(&mut t0, 0, 0, one);
    bc.push_into(&mut t1, 0, nu, -one);
    let domain = if l == 0 {
        btc.push_into(&mut t0, nu, 0, one);
        lc.push_into(&mut t0, nu, nu, one);
        Domain::Complex
    } else {
        btc.push_into(&mut t1, nu, 0, -one);
        lc.push_into(&mut t1, nu, nu, -one);
        Domain::PuncturedPlane
    };
    let pencil = Pencil::new(t0.to_csr(), t1.to_csr(), PencilKind::Auxiliary { l }, domain, omega)?;
    Ok(BlockPencil { pencil, n_u: nu, n_z: nz, l, gamma, lap, z_basis })
}

fn check_omega(omega: f64) -> Result<(), Error> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Config(format!("omega must be positive and finite, got {omega}")));
    }
    Ok(())
}
