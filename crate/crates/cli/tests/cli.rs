use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn stekloff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stekloff")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = stekloff(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn out_arg(dir: &TempDir, sub: &str) -> String {
    dir.path().join(sub).display().to_string()
}

/// Data rows of a CSV written by the tool, as string fields.
fn rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn ok_values(path: &Path) -> Vec<(f64, f64)> {
    let (h, r) = rows(path);
    let col = |name: &str| h.iter().position(|c| c == name).unwrap();
    let (re, im, flag) = (col("re_lambda"), col("im_lambda"), col("flag"));
    let mut v: Vec<(f64, f64)> =
        r.iter().filter(|x| x[flag] == "ok").map(|x| (x[re].parse().unwrap(), x[im].parse().unwrap())).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v
}

#[test]
fn solve_writes_eigenvalues_and_manifest() {
    let d = TempDir::new().unwrap();
    let out = out_arg(&d, "run");
    ok(&["solve", "--cube", "2", "--problem", "modified_schur", "--out", &out]);
    let vals = ok_values(&d.path().join("run/eigenvalues.csv"));
    assert!(!vals.is_empty());
    let text = std::fs::read_to_string(d.path().join("run/eigenvalues.csv")).unwrap();
    assert!(text.starts_with(&format!("# stekloff {}\n# config {{", env!("CARGO_PKG_VERSION"))));
    let m = json(&d.path().join("run/solve.json"));
    assert_eq!(m["schema"], "stekloff.solve/1");
    assert_eq!(m["config"]["problem"], "modified_schur");
    assert_eq!(m["mesh"]["edges"], 98);
    assert_eq!(m["counts"]["ok"].as_u64().unwrap() as usize, vals.len());
}

#[test]
fn auxiliary_formulations_agree() {
    let d = TempDir::new().unwrap();
    let (a, b) = (out_arg(&d, "aux0"), out_arg(&d, "aux1"));
    ok(&["solve", "--cube", "2", "--problem", "aux0", "--out", &a]);
    ok(&["solve", "--cube", "2", "--problem", "aux1", "--set", "export_pencil=true", "--out", &b]);
    let pm = json(&d.path().join("aux1/pencil.json"));
    assert_eq!(pm["l"], 1);
    assert_eq!(pm["domain"], "PuncturedPlane");
    let mtx = std::fs::read_to_string(d.path().join("aux1/a1.mtx")).unwrap();
    let size = format!("{0} {0} {1}", pm["rows"], pm["nnz_a1"]);
    assert!(mtx.lines().nth(1) == Some(size.as_str()), "{:?}", mtx.lines().nth(1));
    let va = ok_values(&d.path().join("aux0/eigenvalues.csv"));
    let vb = ok_values(&d.path().join("aux1/eigenvalues.csv"));
    assert_eq!(va.len(), vb.len());
    assert!(!va.is_empty());
    for (x, y) in va.iter().zip(&vb) {
        let n = x.0.hypot(x.1);
        assert!((x.0 - y.0).hypot(x.1 - y.1) <= 1e-8 * n, "{x:?} vs {y:?}");
    }
}

#[test]
fn invalid_materials_exit_with_config_code() {
    let d = TempDir::new().unwrap();
    let out = out_arg(&d, "bad");
    let r = stekloff(&["solve", "--cube", "1", "--eps", "2-0.5i", "--out", &out]);
    assert_eq!(r.status.code(), Some(2));
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.contains("0 <= Im(ξ^H eps ξ)"), "{err}");
    let r = stekloff(&["solve", "--cube", "1", "--mu", "-1", "--out", &out]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn error_categories() {
    let d = TempDir::new().unwrap();
    let out = out_arg(&d, "err");
    assert_eq!(stekloff(&["solve", "--set", "colour=red", "--out", &out]).status.code(), Some(2));
    assert_eq!(stekloff(&["solve", "--omega", "-1", "--out", &out]).status.code(), Some(2));
    let missing = d.path().join("nothing.msh").display().to_string();
    assert_eq!(stekloff(&["solve", "--mesh", &missing, "--out", &out]).status.code(), Some(3));
    let broken = d.path().join("broken.msh");
    std::fs::write(&broken, "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n1\n1 0 0\n").unwrap();
    let broken = broken.display().to_string();
    assert_eq!(stekloff(&["solve", "--mesh", &broken, "--out", &out]).status.code(), Some(3));
    let r = stekloff(&["solve", "--cube", "2", "--set", "dense_cap=10", "--out", &out]);
    assert_eq!(r.status.code(), Some(5));
}

#[test]
fn identical_configs_give_identical_csvs() {
    let d = TempDir::new().unwrap();
    let cfg = d.path().join("run.cfg");
    let out = out_arg(&d, "det");
    std::fs::write(
        &cfg,
        format!("geometry = cube 2\nproblem = original\nsolver = shift_invert\nshift = 2+0.1i\nk = 6\nseed = 4\nout = {out}\n"),
    )
    .unwrap();
    let c = cfg.display().to_string();
    ok(&["solve", "--config", &c]);
    let first = std::fs::read(d.path().join("det/eigenvalues.csv")).unwrap();
    ok(&["solve", "--config", &c]);
    let second = std::fs::read(d.path().join("det/eigenvalues.csv")).unwrap();
    assert_eq!(first, second);
    assert_eq!(ok_values(&d.path().join("det/eigenvalues.csv")).len(), 6);
}

#[test]
fn flags_override_the_config_file() {
    let d = TempDir::new().unwrap();
    let cfg = d.path().join("run.cfg");
    std::fs::write(&cfg, "# base run\ngeometry = cube 1\nomega = 0.5\n").unwrap();
    let out = out_arg(&d, "ovr");
    ok(&["solve", "--config", &cfg.display().to_string(), "--cube", "2", "--set", "omega=0.75", "--out", &out]);
    let m = json(&d.path().join("ovr/solve.json"));
    assert_eq!(m["mesh"]["edges"], 98);
    assert_eq!(m["config"]["omega"], 0.75);
}

#[test]
fn written_meshes_reproduce_the_spectrum() {
    let d = TempDir::new().unwrap();
    let msh = d.path().join("cube.msh").display().to_string();
    ok(&["mesh", "--cube", "2", "--set", &format!("mesh_out={msh}"), "--out", &out_arg(&d, "m")]);
    assert_eq!(json(&d.path().join("m/mesh_manifest.json"))["mesh"]["tets"], 48);
    ok(&["solve", "--cube", "2", "--out", &out_arg(&d, "gen")]);
    ok(&["solve", "--mesh", &msh, "--out", &out_arg(&d, "file")]);
    let a = ok_values(&d.path().join("gen/eigenvalues.csv"));
    let b = ok_values(&d.path().join("file/eigenvalues.csv"));
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!((x.0 - y.0).abs() <= 1e-10 * x.0.abs());
    }
}

#[test]
fn oracle_table() {
    let d = TempDir::new().unwrap();
    ok(&["oracle", "--set", "n_max=4", "--out", &out_arg(&d, "o")]);
    let (h, r) = rows(&d.path().join("o/oracle.csv"));
    assert_eq!(h, ["family", "n", "lambda", "multiplicity"]);
    let modified: Vec<&Vec<String>> = r.iter().filter(|x| x[0] == "modified").collect();
    assert_eq!(modified.len(), 4);
    for x in &modified {
        let n: usize = x[1].parse().unwrap();
        assert_eq!(x[3].parse::<usize>().unwrap(), 2 * n + 1);
    }
    let r = stekloff(&["oracle", "--eps", "1+0.1i", "--out", &out_arg(&d, "o2")]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn study_on_the_ball_converges_to_the_oracle() {
    let d = TempDir::new().unwrap();
    let out = out_arg(&d, "study");
    ok(&[
        "study", "--ball", "1", "--levels", "3", "--problem", "aux0", "--solver", "shift_invert", "--shift", "0", "--k",
        "40", "--set", "track=1", "--out", &out,
    ]);
    let (h, r) = rows(&d.path().join("study/study.csv"));
    let col = |name: &str| h.iter().position(|c| c == name).unwrap();
    assert_eq!(r.len(), 3);
    assert!(r.iter().all(|x| x[col("status")] == "ok" && x[col("size")] == "3"));
    // errors against the extrapolated value shrink like h^2
    let ratio: f64 = r[1][col("ratio")].parse().unwrap();
    let self_ratio: f64 = r[2][col("self_ratio")].parse().unwrap();
    assert!((3.0..=5.0).contains(&ratio), "{ratio}");
    assert!((3.0..=5.0).contains(&self_ratio), "{self_ratio}");
    let rel: f64 = r[2][col("oracle_rel_error")].parse().unwrap();
    assert!(rel < 5e-3, "{rel}");
    assert_eq!(r[2][col("oracle_multiplicity")], "3");

    let r = stekloff(&["study", "--cube", "1", "--levels", "2", "--out", &out]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn diagnose_report() {
    let d = TempDir::new().unwrap();
    ok(&["diagnose", "--cube", "1", "--levels", "3", "--out", &out_arg(&d, "diag")]);
    let m = json(&d.path().join("diag/diagnose.json"));
    assert_eq!(m["schema"], "stekloff.diagnose/1");
    let levels = m["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    let n_lambda = m["config"]["lambdas"].as_array().unwrap().len();
    let mut counts = Vec::new();
    let mut beta = Vec::new();
    for lv in levels {
        let pts = lv["inf_sup"].as_array().unwrap();
        assert_eq!(pts.len(), n_lambda);
        assert!(pts.iter().all(|p| p["modified"].as_f64().unwrap() > 0.0));
        // the first grid point is λ = -i
        beta.push(pts[0]["modified"].as_f64().unwrap());
        counts.push(lv["probe"]["original_count"].as_u64().unwrap());
        assert!(lv["commuting_gradient"].as_f64().unwrap() <= 1e-8);
    }
    assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    assert!(beta.iter().all(|&b| b >= 0.95 * beta[0]), "{beta:?}");
    assert_eq!(m["compatibility"].as_array().unwrap().len(), 2);
}
