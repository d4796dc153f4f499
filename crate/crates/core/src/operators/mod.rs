//! Discrete pencils for the original and modified problems.

mod kappa;
mod pencil;
mod surface;

pub use kappa::{check_kappa, interior_resonances, KappaReport};
pub use pencil::{
    build_aux_pencil, build_original_pencil, build_schur_pencil, BlockPencil, Domain, Pencil,
    PencilKind,
};
pub use surface::{DiscreteS, ZeroMean};
