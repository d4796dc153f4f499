use serde::Serialize;
use stekloff_core::diagnostics::{
    build_decomposition, build_t, commuting_diagram_defect, compatibility_defect, essential_spectrum_probe,
    inf_sup_constant, nested_prolongation, trace_commutation_defect, DecompositionKind, NestedHierarchy, ProbeLevel,
    TVariant,
};
use stekloff_core::fem::fields::{FnScalar, FnVector};
use stekloff_core::fem::InterpolationRule;
use stekloff_core::operators::{build_original_pencil, build_schur_pencil};
use stekloff_core::{assemble_forms, Forms, C64};

use super::{base_mesh, materials, out_path, refine_spec, write_manifest};
use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Serialize)]
struct InfSupPoint {
    lambda: C64,
    /// Modified (Schur) pencil with the modified T.
    modified: f64,
    /// Original pencil with the original T; absent at `λ = 0`.
    original: Option<f64>,
}

#[derive(Debug, Serialize)]
struct LevelReport {
    level: usize,
    n_vertices: usize,
    n_edges: usize,
    h: f64,
    dim_w1: usize,
    dim_w2: usize,
    dim_w_modified: usize,
    inf_sup: Vec<InfSupPoint>,
    commuting_gradient: f64,
    commuting_curl: f64,
    trace_defect: f64,
    probe: ProbeLevel,
}

fn smooth_fields() -> (FnScalar, FnVector) {
    let scalar = FnScalar {
        value: Box::new(|x| x[0].sin() * x[2].cos()),
        grad: Box::new(|x| [x[0].cos() * x[2].cos(), 0.0, -x[0].sin() * x[2].sin()]),
    };
    let vector = FnVector {
        value: Box::new(|x| [x[1].sin(), 0.0, x[0].cos()]),
        curl: Box::new(|x| [0.0, x[0].sin(), -x[1].cos()]),
        div: Box::new(|_| 0.0),
    };
    (scalar, vector)
}

fn inf_sup_sweep(cfg: &RunConfig, forms: &Forms) -> Result<(Vec<InfSupPoint>, [usize; 3]), CliError> {
    let orig = build_decomposition(forms, DecompositionKind::Original)?;
    let modified = build_decomposition(forms, DecompositionKind::Modified)?;
    let schur = build_schur_pencil(forms, cfg.omega, cfg.gamma)?;
    let original = build_original_pencil(forms, cfg.omega)?;
    let mut out = Vec::with_capacity(cfg.lambdas.len());
    for &lambda in &cfg.lambdas {
        let t = build_t(&modified, lambda, cfg.omega, TVariant::Modified)?;
        let beta_m = inf_sup_constant(&schur, &t, &modified.gram)?;
        let beta_o = if lambda.norm() > 0.0 {
            let t = build_t(&orig, lambda, cfg.omega, TVariant::Original)?;
            Some(inf_sup_constant(&original, &t, &orig.gram)?)
        } else {
            None
        };
        out.push(InfSupPoint { lambda, modified: beta_m, original: beta_o });
    }
    let dims = [orig.w1.as_ref().map_or(0, |w| w.dim()), orig.w.dim(), modified.w.dim()];
    Ok((out, dims))
}

/// Decompositions, inf-sup sweep, essential-spectrum probe and commuting
/// defects on every level of a nested hierarchy.
pub fn run(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let base = base_mesh(cfg)?;
    let mut spec = materials(cfg, &base)?;
    let h = NestedHierarchy::new(base, cfg.levels - 1)?;
    let (scalar, vector) = smooth_fields();
    let rule = InterpolationRule::default();
    let mut levels = Vec::new();
    let mut forms_all: Vec<Forms> = Vec::new();
    let mut lines = Vec::new();
    for (l, mesh) in h.meshes.iter().enumerate() {
        if l > 0 {
            spec = refine_spec(&spec, &h.maps[l - 1]);
        }
        let forms = assemble_forms(mesh, &spec)?;
        let (inf_sup, dims) = inf_sup_sweep(cfg, &forms)?;
        let cd = commuting_diagram_defect(mesh, &scalar, &vector, rule);
        let trace_defect = trace_commutation_defect(mesh, &forms, &vector, rule)?;
        let mut probe = essential_spectrum_probe(
            std::slice::from_ref(mesh),
            &spec,
            cfg.omega,
            cfg.delta,
            cfg.gamma,
            &cfg.qz_options(),
        )?
        .remove(0);
        probe.level = l;
        lines.push(format!(
            "level {l}: {} edges, beta(modified) {}, near-zero count {} (modified {})",
            mesh.n_edges(),
            inf_sup.iter().map(|p| format!("{:.4}", p.modified)).collect::<Vec<_>>().join(" "),
            probe.original_count,
            probe.modified_count
        ));
        levels.push(LevelReport {
            level: l,
            n_vertices: mesh.n_vertices(),
            n_edges: mesh.n_edges(),
            h: mesh.max_edge_length(),
            dim_w1: dims[0],
            dim_w2: dims[1],
            dim_w_modified: dims[2],
            inf_sup,
            commuting_gradient: cd.gradient,
            commuting_curl: cd.curl,
            trace_defect,
            probe,
        });
        forms_all.push(forms);
    }
    let mut compat = Vec::new();
    for l in 0..forms_all.len().saturating_sub(1) {
        let p = nested_prolongation(&h, l, l + 1);
        let d = compatibility_defect(&forms_all[l], &forms_all[l + 1], &p, cfg.omega, DecompositionKind::Modified, None)?;
        compat.push(serde_json::json!({ "coarse": l, "fine": l + 1, "modified": d }));
    }
    let path = out_path(cfg, "diagnose.json")?;
    write_manifest(
        &path,
        cfg,
        "stekloff.diagnose/1",
        serde_json::json!({ "levels": levels, "compatibility": compat }),
    )?;
    lines.push(format!("wrote {}", path.display()));
    Ok(lines)
}
