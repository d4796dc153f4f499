use stekloff_core::mesh::{extract_boundary, io};

use super::{base_mesh, mesh_summary, out_path, write_manifest};
use crate::config::RunConfig;
use crate::error::CliError;

/// Generate or read the configured mesh, then write it with a manifest.
pub fn run(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let mesh = base_mesh(cfg)?;
    let surface = extract_boundary(&mesh)?;
    let path = match &cfg.mesh_out {
        Some(p) => p.clone(),
        None => out_path(cfg, "mesh.json")?,
    };
    let text = match path.extension().and_then(|e| e.to_str()) {
        Some("msh") => io::mesh_to_msh(&mesh),
        Some("json") => io::mesh_to_json(&mesh),
        _ => return Err(CliError::Config(format!("{}: mesh output must end in .msh or .json", path.display()))),
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    let volume: f64 = (0..mesh.n_tets()).map(|t| mesh.tet_volume(t)).sum();
    let manifest = out_path(cfg, "mesh_manifest.json")?;
    write_manifest(
        &manifest,
        cfg,
        "stekloff.mesh/1",
        serde_json::json!({
            "mesh": mesh_summary(&mesh),
            "volume": volume,
            "boundary_area": surface.total_area(),
            "output": path.display().to_string(),
        }),
    )?;
    Ok(vec![
        format!("mesh: {} vertices, {} edges, {} tets", mesh.n_vertices(), mesh.n_edges(), mesh.n_tets()),
        format!("wrote {}", path.display()),
        format!("wrote {}", manifest.display()),
    ])
}
