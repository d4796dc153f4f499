//! Subcommand implementations and the setup they share.

pub mod diagnose;
pub mod mesh;
pub mod oracle;
pub mod solve;
pub mod study;

use std::fs;
use std::path::{Path, PathBuf};

use stekloff_core::eigen::{solve_dense_qz, solve_shift_invert, EigenSolution};
use stekloff_core::fem::{validate_materials, Tensor, TensorField};
use stekloff_core::mesh::{generate_ball, generate_cube, io, validate, RefinementMap};
use stekloff_core::operators::{build_aux_pencil, build_original_pencil, build_schur_pencil};
use stekloff_core::{Forms, MaterialSpec, Mesh, Pencil, C64, VERSION};

use crate::config::{Geometry, Materials, Problem, RunConfig, Solver};
use crate::error::CliError;

/// The base mesh named by the configuration, validated.
pub fn base_mesh(cfg: &RunConfig) -> Result<Mesh, CliError> {
    let mesh = match &cfg.geometry {
        Geometry::Cube { n } => generate_cube(*n)?,
        Geometry::Ball { level } => generate_ball(cfg.radius, *level)?,
        Geometry::File { path } => {
            let read = match path.extension().and_then(|e| e.to_str()) {
                Some("msh") => io::read_msh(path),
                Some("json") => io::read_json(path),
                _ => return Err(CliError::Config(format!("{}: mesh files must end in .msh or .json", path.display()))),
            };
            read.map_err(|e| match e {
                stekloff_core::Error::Io(io) => CliError::Mesh(format!("{}: {io}", path.display())),
                other => CliError::Core(other),
            })?
        }
    };
    let report = validate(&mesh);
    if !report.is_valid() {
        let first: Vec<String> = report.violations.iter().take(5).map(|v| format!("{v:?}")).collect();
        return Err(CliError::Mesh(format!(
            "mesh fails validation with {} violation(s): {}",
            report.violations.len(),
            first.join("; ")
        )));
    }
    Ok(mesh)
}

fn inverse3(m: &Tensor) -> Option<Tensor> {
    let z = C64::new(0.0, 0.0);
    let mut inv = [[z; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            // cofactor of (j, i)
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        }
    }
    let det: C64 = (0..3).map(|k| m[0][k] * inv[k][0]).sum();
    let scale = m.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    if det.norm() <= 1e-14 * scale.powi(3) {
        return None;
    }
    for row in inv.iter_mut() {
        for v in row.iter_mut() {
            *v /= det;
        }
    }
    Some(inv)
}

/// Material specification for `mesh`, checked for passivity and
/// coercivity. Violations are configuration errors.
pub fn materials(cfg: &RunConfig, mesh: &Mesh) -> Result<MaterialSpec, CliError> {
    let spec = match &cfg.materials {
        Materials::Uniform { eps, mu } => {
            let mu_inv = inverse3(&mu.tensor()).ok_or_else(|| CliError::Config("mu is singular".into()))?;
            MaterialSpec { eps: TensorField::Uniform(eps.tensor()), mu_inv: TensorField::Uniform(mu_inv) }
        }
        Materials::File { path } => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
    };
    validate_materials(&spec, mesh.n_tets()).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(spec)
}

/// Carry per-tetrahedron data from parents to children.
pub fn refine_spec(spec: &MaterialSpec, map: &RefinementMap) -> MaterialSpec {
    let down = |f: &TensorField| match f {
        TensorField::Uniform(t) => TensorField::Uniform(*t),
        TensorField::PerTet(v) => TensorField::PerTet(map.parent.iter().map(|&p| v[p]).collect()),
    };
    MaterialSpec { eps: down(&spec.eps), mu_inv: down(&spec.mu_inv) }
}

/// The configured pencil and the number of leading entries of an
/// eigenvector that hold the edge field.
pub fn build_pencil(cfg: &RunConfig, forms: &Forms) -> Result<(Pencil, usize, Option<f64>), CliError> {
    let n = forms.dofs.n_edges;
    Ok(match cfg.problem {
        Problem::Original => (build_original_pencil(forms, cfg.omega)?, n, None),
        Problem::ModifiedSchur => {
            let gamma = cfg.gamma.resolve_gamma(&forms.lap_bnd);
            (build_schur_pencil(forms, cfg.omega, cfg.gamma)?, n, gamma)
        }
        Problem::Aux0 | Problem::Aux1 => {
            let l = if cfg.problem == Problem::Aux0 { 0 } else { 1 };
            let b = build_aux_pencil(forms, cfg.omega, l, cfg.gamma)?;
            (b.pencil, b.n_u, b.gamma)
        }
    })
}

pub fn solve(cfg: &RunConfig, p: &Pencil) -> Result<EigenSolution, CliError> {
    Ok(match cfg.solver {
        Solver::Qz => solve_dense_qz(p, &cfg.qz_options())?,
        Solver::ShiftInvert { shift, k } => solve_shift_invert(p, &cfg.shift_invert_options(shift, k))?,
    })
}

/// Point the eigenvalues are ordered around.
pub fn target(cfg: &RunConfig) -> C64 {
    match cfg.solver {
        Solver::Qz => C64::new(0.0, 0.0),
        Solver::ShiftInvert { shift, .. } => shift,
    }
}

pub fn out_path(cfg: &RunConfig, name: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(&cfg.out_dir).map_err(|e| CliError::io(&cfg.out_dir, e))?;
    Ok(cfg.out_dir.join(name))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// CSV preceded by `#` lines carrying the version and resolved config.
pub fn write_csv(path: &Path, cfg: &RunConfig, body: &str) -> Result<(), CliError> {
    let head = format!("# stekloff {VERSION}\n# config {}\n", cfg.to_json());
    write(path, &(head + body))
}

/// JSON document with `schema`, `version` and `config` fields added.
pub fn write_manifest(path: &Path, cfg: &RunConfig, schema: &str, mut body: serde_json::Value) -> Result<(), CliError> {
    if let Some(obj) = body.as_object_mut() {
        obj.insert("schema".into(), schema.into());
        obj.insert("version".into(), VERSION.into());
        obj.insert("config".into(), cfg.to_json());
    }
    let text = serde_json::to_string_pretty(&body).expect("manifest serializes");
    write(path, &(text + "\n"))
}

pub fn mesh_summary(mesh: &Mesh) -> serde_json::Value {
    let nb = mesh.boundary_vertex_mask().iter().filter(|&&b| b).count();
    serde_json::json!({
        "vertices": mesh.n_vertices(),
        "edges": mesh.n_edges(),
        "faces": mesh.n_faces(),
        "tets": mesh.n_tets(),
        "boundary_vertices": nb,
        "boundary_triangles": mesh.boundary_tris.len(),
        "h": mesh.max_edge_length(),
    })
}
