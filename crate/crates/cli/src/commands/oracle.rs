use std::fmt::Write as _;

use stekloff_core::oracle::{modified_ball_eigenvalues, original_ball_sequences, OracleConfig, OracleEigenvalue};

use super::{out_path, write_csv, write_manifest};
use crate::config::RunConfig;
use crate::error::CliError;

pub fn oracle_config(cfg: &RunConfig) -> Result<OracleConfig, CliError> {
    let (eps, mu) = cfg
        .scalar_real_materials()
        .ok_or_else(|| CliError::Config("the ball oracle needs real scalar eps and mu".into()))?;
    Ok(OracleConfig { omega: cfg.omega, eps, mu, radius: cfg.radius, n_max: cfg.n_max })
}

/// Closed-form ball eigenvalues for the configured materials and radius.
pub fn run(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let oc = oracle_config(cfg)?;
    let modified = modified_ball_eigenvalues(&oc)?;
    let original = original_ball_sequences(&oc)?;
    let mut csv = String::from("family,n,lambda,multiplicity\n");
    let mut rows = |family: &str, vals: &[OracleEigenvalue]| {
        for e in vals {
            let _ = writeln!(csv, "{family},{},{:.17e},{}", e.n, e.lambda, e.multiplicity);
        }
    };
    rows("modified", &modified);
    rows("original_zero", &original.toward_zero);
    rows("original_infinity", &original.toward_infinity);
    let path = out_path(cfg, "oracle.csv")?;
    write_csv(&path, cfg, &csv)?;
    let manifest = out_path(cfg, "oracle.json")?;
    write_manifest(
        &manifest,
        cfg,
        "stekloff.oracle/1",
        serde_json::json!({
            "kr": oc.kr(),
            "modified": modified,
            "original_zero": original.toward_zero,
            "original_infinity": original.toward_infinity,
        }),
    )?;
    Ok(vec![
        format!("oracle: {} degrees, kR = {:.6}", oc.n_max, oc.kr()),
        format!("wrote {}", path.display()),
        format!("wrote {}", manifest.display()),
    ])
}
