//! Finite-element discretization of electromagnetic Stekloff eigenvalue
//! problems on tetrahedral meshes.
//!
//! The crate covers mesh generation and refinement, lowest-order
//! Nédélec/Lagrange assembly, the original and modified (auxiliary and
//! Schur) pencils, dense QZ and sparse shift-invert eigensolvers, discrete
//! stability diagnostics, and a closed-form oracle for the unit ball.

pub mod diagnostics;
pub mod eigen;
pub mod error;
pub mod fem;
pub mod linalg;
pub mod mesh;
pub mod operators;
pub mod oracle;

pub use error::{Error, Result};
pub use fem::{assemble_forms, Dofs, Forms, Material, MaterialSpec};
pub use linalg::{CsrMatrix, C64};
pub use mesh::{Mesh, SurfaceMesh};
pub use operators::{BlockPencil, Pencil, ZeroMean};

/// Crate version embedded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
