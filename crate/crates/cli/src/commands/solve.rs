use std::fmt::Write as _;

use stekloff_core::eigen::{EigenSolution, PairFlag};
use stekloff_core::operators::check_kappa;
use stekloff_core::assemble_forms;

use super::{base_mesh, build_pencil, materials, mesh_summary, out_path, solve, write_csv, write_manifest};
use crate::config::{Problem, RunConfig};
use crate::error::CliError;

/// Rows `index,re_lambda,im_lambda,abs_lambda,beta,residual,flag` for every
/// pair except infinite ones.
pub fn eigen_csv(sol: &EigenSolution) -> String {
    let mut s = String::from("index,re_lambda,im_lambda,abs_lambda,beta,residual,flag\n");
    for (i, p) in sol.pairs.iter().filter(|p| p.flag != PairFlag::Infinite).enumerate() {
        let l = p.lambda.expect("finite pair");
        let _ = writeln!(
            s,
            "{i},{:.17e},{:.17e},{:.17e},{:.6e},{:.6e},{}",
            l.re,
            l.im,
            l.norm(),
            p.beta,
            p.residual,
            p.flag.as_str()
        );
    }
    s
}

pub fn run(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let mesh = base_mesh(cfg)?;
    let spec = materials(cfg, &mesh)?;
    let forms = assemble_forms(&mesh, &spec)?;
    let kappa = check_kappa(&forms, cfg.omega);
    let mut lines = Vec::new();
    if let Some(w) = &kappa.warning {
        lines.push(format!("warning: {w}"));
    }
    let (pencil, n_u, gamma) = build_pencil(cfg, &forms)?;
    let mut exported = Vec::new();
    if cfg.export_pencil {
        for (name, m) in [("a0.mtx", &pencil.a0), ("a1.mtx", &pencil.a1)] {
            let path = out_path(cfg, name)?;
            std::fs::write(&path, m.to_matrix_market()).map_err(|e| CliError::io(&path, e))?;
            exported.push(path);
        }
        let path = out_path(cfg, "pencil.json")?;
        let l = match cfg.problem {
            Problem::Aux0 => Some(0),
            Problem::Aux1 => Some(1),
            _ => None,
        };
        write_manifest(
            &path,
            cfg,
            "stekloff.pencil/1",
            serde_json::json!({
                "kind": pencil.kind,
                "rows": pencil.dim(),
                "nnz_a0": pencil.a0.nnz(),
                "nnz_a1": pencil.a1.nnz(),
                "n_u": n_u,
                "l": l,
                "gamma": gamma,
                "omega": pencil.omega,
                "domain": pencil.domain,
                "a0": "a0.mtx",
                "a1": "a1.mtx",
            }),
        )?;
        exported.push(path);
    }
    let sol = solve(cfg, &pencil)?;
    let counts = serde_json::json!({
        "ok": sol.count(PairFlag::Ok),
        "large_residual": sol.count(PairFlag::LargeResidual),
        "infinite": sol.count(PairFlag::Infinite),
        "excluded_zero": sol.count(PairFlag::ExcludedZero),
    });
    let csv = out_path(cfg, "eigenvalues.csv")?;
    write_csv(&csv, cfg, &eigen_csv(&sol))?;
    let manifest = out_path(cfg, "solve.json")?;
    write_manifest(
        &manifest,
        cfg,
        "stekloff.solve/1",
        serde_json::json!({
            "mesh": mesh_summary(&mesh),
            "pencil": { "kind": pencil.kind, "dim": pencil.dim(), "gamma": gamma },
            "kappa": kappa,
            "solver": sol.solver,
            "notes": sol.notes,
            "counts": counts,
        }),
    )?;
    for n in &sol.notes {
        lines.push(format!("note: {n}"));
    }
    lines.push(format!(
        "{}: dim {}, {} finite eigenvalue(s) ({} ok)",
        sol.solver,
        sol.dim,
        sol.finite().count(),
        sol.count(PairFlag::Ok)
    ));
    for p in &exported {
        lines.push(format!("wrote {}", p.display()));
    }
    lines.push(format!("wrote {}", csv.display()));
    lines.push(format!("wrote {}", manifest.display()));
    Ok(lines)
}
