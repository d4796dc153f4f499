//! Run configuration: a flat `key = value` file plus flag overrides,
//! resolved into typed settings.

use std::path::{Path, PathBuf};

use serde::Serialize;
use stekloff_core::eigen::{QzOptions, ShiftInvertOptions};
use stekloff_core::fem::{scalar_tensor, Tensor};
use stekloff_core::{ZeroMean, C64};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Cube { n: usize },
    Ball { level: usize },
    File { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coefficient {
    Scalar(C64),
    Tensor(Tensor),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Materials {
    Uniform { eps: Coefficient, mu: Coefficient },
    /// JSON file holding a per-tetrahedron material specification.
    File { path: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    Original,
    ModifiedSchur,
    Aux0,
    Aux1,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Solver {
    Qz,
    ShiftInvert { shift: C64, k: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub residual: f64,
    pub beta: f64,
    pub zero: f64,
    pub max_iter: usize,
    pub dense_cap: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub geometry: Geometry,
    /// Ball radius, used by the ball generator and the oracle.
    pub radius: f64,
    pub materials: Materials,
    pub omega: f64,
    pub problem: Problem,
    pub gamma: ZeroMean,
    pub solver: Solver,
    pub tolerances: Tolerances,
    pub out_dir: PathBuf,
    /// Extra path for the `mesh` command's mesh file; `.msh` or `.json`.
    pub mesh_out: Option<PathBuf>,
    pub seed: u64,
    /// Also write the pencil matrices in Matrix Market form.
    pub export_pencil: bool,
    /// Mesh levels for `study` and `diagnose`.
    pub levels: usize,
    /// Number of eigenvalue clusters tracked by `study`.
    pub track: usize,
    /// Relative gap below which neighbouring eigenvalues form one cluster.
    pub cluster_tol: f64,
    /// Minimum prolongation overlap for a match across levels.
    pub overlap_min: f64,
    /// `λ` grid for the inf-sup sweep.
    pub lambdas: Vec<C64>,
    /// Probe radius for the essential-spectrum count.
    pub delta: f64,
    /// Highest oracle degree.
    pub n_max: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let one = C64::new(1.0, 0.0);
        Self {
            command: String::new(),
            geometry: Geometry::Cube { n: 2 },
            radius: 1.0,
            materials: Materials::Uniform { eps: Coefficient::Scalar(one), mu: Coefficient::Scalar(one) },
            omega: 1.0,
            problem: Problem::ModifiedSchur,
            gamma: ZeroMean::default(),
            solver: Solver::Qz,
            tolerances: Tolerances { residual: 1e-8, beta: 1e-8, zero: 1e-8, max_iter: 500, dense_cap: 6000 },
            out_dir: PathBuf::from("out"),
            mesh_out: None,
            seed: 0,
            export_pencil: false,
            levels: 3,
            track: 3,
            cluster_tol: 0.05,
            overlap_min: 0.5,
            lambdas: vec![C64::new(0.0, -1.0), one, C64::new(3.0, 2.0)],
            delta: 0.1,
            n_max: 8,
        }
    }
}

fn bad(key: &str, value: &str, what: &str) -> CliError {
    CliError::Config(format!("{key} = {value:?}: {what}"))
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| bad(key, value, "not a number"))
}

/// Parse `a`, `bi`, `a+bi`, `a-bi` (`j` also accepted).
pub fn parse_complex(s: &str) -> Option<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse().ok().map(|re| C64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse().ok()?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse().ok()?,
    };
    Some(C64::new(re, im))
}

fn complex(key: &str, value: &str) -> Result<C64, CliError> {
    parse_complex(value).ok_or_else(|| bad(key, value, "not a complex number"))
}

/// A scalar, or nine comma-separated row-major entries.
fn coefficient(key: &str, value: &str) -> Result<Coefficient, CliError> {
    let parts: Vec<&str> = value.split(',').collect();
    match parts.len() {
        1 => Ok(Coefficient::Scalar(complex(key, value)?)),
        9 => {
            let mut t = [[C64::new(0.0, 0.0); 3]; 3];
            for (k, p) in parts.iter().enumerate() {
                t[k / 3][k % 3] = complex(key, p)?;
            }
            Ok(Coefficient::Tensor(t))
        }
        _ => Err(bad(key, value, "expected a scalar or 9 comma-separated entries")),
    }
}

impl Coefficient {
    pub fn tensor(&self) -> Tensor {
        match self {
            Coefficient::Scalar(v) => scalar_tensor(*v),
            Coefficient::Tensor(t) => *t,
        }
    }
}

impl RunConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        match key {
            "geometry" => {
                let mut it = value.split_whitespace();
                let kind = it.next().unwrap_or("");
                let arg = it.next();
                self.geometry = match (kind, arg) {
                    ("cube", Some(n)) => Geometry::Cube { n: number(key, n)? },
                    ("ball", Some(l)) => Geometry::Ball { level: number(key, l)? },
                    ("file", Some(p)) => Geometry::File { path: PathBuf::from(p) },
                    _ => return Err(bad(key, value, "expected `cube N`, `ball LEVEL` or `file PATH`")),
                };
            }
            "cube" => self.geometry = Geometry::Cube { n: number(key, value)? },
            "ball" => self.geometry = Geometry::Ball { level: number(key, value)? },
            "mesh" => self.geometry = Geometry::File { path: PathBuf::from(value) },
            "radius" => self.radius = number(key, value)?,
            "eps" | "mu" => {
                let c = coefficient(key, value)?;
                let (eps, mu) = match &self.materials {
                    Materials::Uniform { eps, mu } => (eps.clone(), mu.clone()),
                    Materials::File { .. } => {
                        let one = Coefficient::Scalar(C64::new(1.0, 0.0));
                        (one.clone(), one)
                    }
                };
                self.materials = if key == "eps" {
                    Materials::Uniform { eps: c, mu }
                } else {
                    Materials::Uniform { eps, mu: c }
                };
            }
            "materials" => self.materials = Materials::File { path: PathBuf::from(value) },
            "omega" => self.omega = number(key, value)?,
            "problem" => {
                self.problem = match value {
                    "original" => Problem::Original,
                    "modified_schur" | "schur" => Problem::ModifiedSchur,
                    "aux0" | "aux l=0" => Problem::Aux0,
                    "aux1" | "aux l=1" => Problem::Aux1,
                    _ => return Err(bad(key, value, "expected original, modified_schur, aux0 or aux1")),
                }
            }
            "gamma" => {
                self.gamma = match value {
                    "auto" => ZeroMean::Gamma(None),
                    "deflation" => ZeroMean::Deflation,
                    v => {
                        let g: f64 = number(key, v)?;
                        if !(g > 0.0) {
                            return Err(bad(key, value, "gamma must be positive"));
                        }
                        ZeroMean::Gamma(Some(g))
                    }
                }
            }
            "solver" => {
                self.solver = match value {
                    "qz" => Solver::Qz,
                    "shift_invert" => match self.solver {
                        Solver::ShiftInvert { .. } => self.solver,
                        Solver::Qz => Solver::ShiftInvert { shift: C64::new(0.0, 0.0), k: 10 },
                    },
                    _ => return Err(bad(key, value, "expected qz or shift_invert")),
                }
            }
            "shift" | "k" => {
                let (mut shift, mut k) = match self.solver {
                    Solver::ShiftInvert { shift, k } => (shift, k),
                    Solver::Qz => (C64::new(0.0, 0.0), 10),
                };
                if key == "shift" {
                    shift = complex(key, value)?;
                } else {
                    k = number(key, value)?;
                    if k == 0 {
                        return Err(bad(key, value, "k must be positive"));
                    }
                }
                self.solver = Solver::ShiftInvert { shift, k };
            }
            "residual_tol" => self.tolerances.residual = number(key, value)?,
            "beta_tol" => self.tolerances.beta = number(key, value)?,
            "zero_tol" => self.tolerances.zero = number(key, value)?,
            "max_iter" => self.tolerances.max_iter = number(key, value)?,
            "dense_cap" => self.tolerances.dense_cap = number(key, value)?,
            "out" | "out_dir" => self.out_dir = PathBuf::from(value),
            "mesh_out" => self.mesh_out = Some(PathBuf::from(value)),
            "seed" => self.seed = number(key, value)?,
            "export_pencil" => {
                self.export_pencil = match value {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => return Err(bad(key, value, "expected true or false")),
                }
            }
            "levels" => self.levels = number(key, value)?,
            "track" => self.track = number(key, value)?,
            "cluster_tol" => self.cluster_tol = number(key, value)?,
            "overlap_min" => self.overlap_min = number(key, value)?,
            "lambdas" => {
                self.lambdas =
                    value.split(';').filter(|s| !s.trim().is_empty()).map(|s| complex(key, s)).collect::<Result<_, _>>()?;
            }
            "delta" => self.delta = number(key, value)?,
            "n_max" => self.n_max = number(key, value)?,
            _ => return Err(CliError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Apply every setting of a config file. Blank lines and `#` comments
    /// are ignored.
    pub fn apply_text(&mut self, text: &str, origin: &Path) -> Result<(), CliError> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("{}:{}: expected key = value", origin.display(), no + 1))
            })?;
            self.set(k.trim(), v).map_err(|e| CliError::Config(format!("{}:{}: {e}", origin.display(), no + 1)))?;
        }
        Ok(())
    }

    /// Cross-field checks that single settings cannot make.
    pub fn check(&self) -> Result<(), CliError> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(CliError::Config(format!("omega must be positive and finite, got {}", self.omega)));
        }
        if self.geometry == (Geometry::Cube { n: 0 }) {
            return Err(CliError::Config("cube needs n >= 1".into()));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(CliError::Config(format!("ball radius must be positive, got {}", self.radius)));
        }
        if self.command == "study" && self.levels < 3 {
            return Err(CliError::Config(format!("study needs levels >= 3, got {}", self.levels)));
        }
        if self.levels == 0 {
            return Err(CliError::Config("levels must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.overlap_min) {
            return Err(CliError::Config(format!("overlap_min must lie in [0, 1], got {}", self.overlap_min)));
        }
        Ok(())
    }

    pub fn qz_options(&self) -> QzOptions {
        QzOptions {
            dense_cap: self.tolerances.dense_cap,
            beta_tol: self.tolerances.beta,
            residual_tol: self.tolerances.residual,
            zero_tol: self.tolerances.zero,
        }
    }

    pub fn shift_invert_options(&self, shift: C64, k: usize) -> ShiftInvertOptions {
        ShiftInvertOptions {
            shift,
            k,
            residual_tol: self.tolerances.residual,
            max_iter: self.tolerances.max_iter,
            seed: self.seed,
            zero_tol: self.tolerances.zero,
            ..Default::default()
        }
    }

    /// Scalar real `(eps, mu)` when the materials allow a ball oracle.
    pub fn scalar_real_materials(&self) -> Option<(f64, f64)> {
        match &self.materials {
            Materials::Uniform { eps: Coefficient::Scalar(e), mu: Coefficient::Scalar(m) } if e.im == 0.0 && m.im == 0.0 => {
                Some((e.re, m.re))
            }
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("2"), Some(c(2.0, 0.0)));
        assert_eq!(parse_complex("-i"), Some(c(0.0, -1.0)));
        assert_eq!(parse_complex("3+2i"), Some(c(3.0, 2.0)));
        assert_eq!(parse_complex("1 - 0.5j"), Some(c(1.0, -0.5)));
        assert_eq!(parse_complex("1e-3-2e+1i"), Some(c(1e-3, -20.0)));
        assert_eq!(parse_complex("-2.5i"), Some(c(0.0, -2.5)));
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(parse_complex(""), None);
    }

    #[test]
    fn file_then_overrides() {
        let mut cfg = RunConfig::default();
        let text = "# comment\ngeometry = ball 2\nradius = 0.5\nproblem = aux l=1\nsolver = shift_invert\nk = 12 # trailing\nlambdas = -1i; 2\n";
        cfg.apply_text(text, Path::new("run.cfg")).unwrap();
        cfg.set("shift", "1+0.1i").unwrap();
        assert_eq!((&cfg.geometry, cfg.radius), (&Geometry::Ball { level: 2 }, 0.5));
        assert_eq!(cfg.problem, Problem::Aux1);
        assert_eq!(cfg.solver, Solver::ShiftInvert { shift: c(1.0, 0.1), k: 12 });
        assert_eq!(cfg.lambdas, vec![c(0.0, -1.0), c(2.0, 0.0)]);
    }

    #[test]
    fn tensors_and_errors() {
        let mut cfg = RunConfig::default();
        cfg.set("eps", "2,0,0, 0,3,0, 0,0,4+0.1i").unwrap();
        let Materials::Uniform { eps, .. } = &cfg.materials else { panic!() };
        assert_eq!(eps.tensor()[2][2], c(4.0, 0.1));
        assert!(cfg.set("eps", "1,2").is_err());
        assert!(cfg.set("gamma", "-1").is_err());
        assert!(cfg.set("colour", "red").is_err());
        let e = cfg.apply_text("omega 3", Path::new("x.cfg")).unwrap_err();
        assert!(e.to_string().contains("x.cfg:1"));
        cfg.command = "study".into();
        cfg.levels = 2;
        assert!(cfg.check().is_err());
    }
}
