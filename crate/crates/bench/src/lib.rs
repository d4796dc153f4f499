//! Benchmark fixtures shared by the criterion benches.

use stekloff_core::mesh::{generate_ball, generate_cube};
use stekloff_core::operators::{build_aux_pencil, build_schur_pencil};
use stekloff_core::{assemble_forms, Forms, MaterialSpec, Mesh, Pencil, ZeroMean};

pub fn cube(n: usize) -> Mesh {
    generate_cube(n).expect("cube mesh")
}

pub fn ball(level: usize) -> Mesh {
    generate_ball(1.0, level).expect("ball mesh")
}

pub fn vacuum_forms(mesh: &Mesh) -> Forms {
    assemble_forms(mesh, &MaterialSpec::vacuum()).expect("assembly")
}

/// Schur pencil of the modified problem at `omega = 1`.
pub fn schur_pencil(mesh: &Mesh) -> Pencil {
    build_schur_pencil(&vacuum_forms(mesh), 1.0, ZeroMean::default()).expect("schur pencil")
}

/// Two-field pencil with `l = 0` at `omega = 1`.
pub fn aux0_pencil(mesh: &Mesh) -> Pencil {
    build_aux_pencil(&vacuum_forms(mesh), 1.0, 0, ZeroMean::default()).expect("aux pencil").pencil
}
