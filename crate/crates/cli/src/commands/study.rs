//! Convergence study over a nested mesh hierarchy.
//!
//! Eigenvalues at the coarsest level are grouped into clusters; each
//! cluster is followed to the next level by prolongating its eigenvectors
//! and picking the fine eigenvectors that lie mostly in their span.

use std::fmt::Write as _;

use serde::Serialize;
use stekloff_core::diagnostics::{nested_prolongation, NestedHierarchy};
use stekloff_core::eigen::PairFlag;
use stekloff_core::linalg::{dot_c, CsrMatrix};
use stekloff_core::oracle::{modified_ball_eigenvalues, original_ball_sequences};
use stekloff_core::{assemble_forms, C64};

use super::oracle::oracle_config;
use super::{base_mesh, build_pencil, materials, out_path, refine_spec, solve, target, write_csv, write_manifest};
use crate::config::{Geometry, Problem, RunConfig};
use crate::error::CliError;

struct Candidate {
    lambda: C64,
    /// Edge part of the eigenvector.
    u: Vec<C64>,
}

struct LevelData {
    n_edges: usize,
    h: f64,
    x: CsrMatrix<f64>,
    cands: Vec<Candidate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrackedLevel {
    pub level: usize,
    pub n_edges: usize,
    pub h: f64,
    pub matched: usize,
    pub min_overlap: f64,
    pub mean: C64,
    pub spread: f64,
    pub values: Vec<C64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrackedMode {
    pub mode: usize,
    pub size: usize,
    pub levels: Vec<TrackedLevel>,
    pub richardson: Option<C64>,
    pub errors: Vec<f64>,
    pub ratios: Vec<Option<f64>>,
    pub self_ratios: Vec<Option<f64>>,
    pub oracle: Option<(f64, usize)>,
    pub oracle_rel_error: Option<f64>,
}

/// Group values whose neighbours (ordered by real part) are within
/// `tol * |λ|` of each other.
fn cluster(vals: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    idx.sort_by(|&a, &b| vals[a].re.total_cmp(&vals[b].re).then(vals[a].im.total_cmp(&vals[b].im)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match groups.last_mut() {
            Some(g) if {
                let last = vals[*g.last().unwrap()];
                (vals[i] - last).norm() <= tol * vals[i].norm().max(last.norm())
            } =>
            {
                g.push(i)
            }
            _ => groups.push(vec![i]),
        }
    }
    groups
}

fn x_dot(x: &CsrMatrix<f64>, a: &[C64], b: &[C64]) -> C64 {
    dot_c(a, &x.mul_vec(b))
}

/// `X`-orthonormal basis of the span of `cols` by modified Gram-Schmidt.
fn orthonormal(x: &CsrMatrix<f64>, cols: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
    let mut q: Vec<Vec<C64>> = Vec::new();
    for mut v in cols {
        let before = x_dot(x, &v, &v).re.sqrt();
        for b in &q {
            let c = x_dot(x, b, &v);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
        let n = x_dot(x, &v, &v).re.sqrt();
        if n > 1e-10 * before {
            v.iter_mut().for_each(|z| *z /= n);
            q.push(v);
        }
    }
    q
}

/// `‖P_Q u‖_X / ‖u‖_X`.
fn overlap(x: &CsrMatrix<f64>, q: &[Vec<C64>], u: &[C64]) -> f64 {
    let xu = x.mul_vec(u);
    let proj: f64 = q.iter().map(|b| dot_c(b, &xu).norm_sqr()).sum();
    (proj / dot_c(u, &xu).re).sqrt().min(1.0)
}

fn mean(v: &[C64]) -> C64 {
    v.iter().sum::<C64>() / v.len() as f64
}

fn spread(v: &[C64]) -> f64 {
    let m = mean(v);
    v.iter().map(|z| (z - m).norm()).fold(0.0, f64::max)
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| format!("{x:.6e}"))
}

pub fn run(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let base = base_mesh(cfg)?;
    let spec0 = materials(cfg, &base)?;
    let h = NestedHierarchy::new(base, cfg.levels - 1)?;
    let mut specs = vec![spec0];
    for map in &h.maps {
        let next = refine_spec(specs.last().unwrap(), map);
        specs.push(next);
    }

    let mut data = Vec::with_capacity(h.meshes.len());
    let mut lines = Vec::new();
    for (l, (mesh, spec)) in h.meshes.iter().zip(&specs).enumerate() {
        let forms = assemble_forms(mesh, spec)?;
        let (pencil, n_u, _) = build_pencil(cfg, &forms)?;
        let sol = solve(cfg, &pencil)?;
        let cands = sol
            .pairs
            .iter()
            .filter(|p| p.flag == PairFlag::Ok)
            .map(|p| Candidate { lambda: p.lambda.unwrap(), u: p.vector[..n_u].to_vec() })
            .collect::<Vec<_>>();
        lines.push(format!("level {l}: {} edges, {} eigenvalue(s)", mesh.n_edges(), cands.len()));
        data.push(LevelData {
            n_edges: mesh.n_edges(),
            h: mesh.max_edge_length(),
            x: forms.curl_curl_unit.lin_comb(1.0, &forms.mass_l2, 1.0),
            cands,
        });
    }

    // clusters at the coarsest level, nearest to the target first
    let t = target(cfg);
    let vals0: Vec<C64> = data[0].cands.iter().map(|c| c.lambda).collect();
    let mut groups = cluster(&vals0, cfg.cluster_tol);
    groups.sort_by(|a, b| {
        let da = (mean(&a.iter().map(|&i| vals0[i]).collect::<Vec<_>>()) - t).norm();
        let db = (mean(&b.iter().map(|&i| vals0[i]).collect::<Vec<_>>()) - t).norm();
        da.total_cmp(&db)
    });
    groups.truncate(cfg.track);
    if groups.is_empty() {
        return Err(CliError::Config("no eigenvalues at the coarsest level to track".into()));
    }

    let mut modes: Vec<TrackedMode> = Vec::new();
    // current members (candidate indices) of each mode
    let mut members: Vec<Vec<usize>> = groups.clone();
    for (m, g) in groups.iter().enumerate() {
        let values: Vec<C64> = g.iter().map(|&i| vals0[i]).collect();
        modes.push(TrackedMode {
            mode: m,
            size: g.len(),
            levels: vec![TrackedLevel {
                level: 0,
                n_edges: data[0].n_edges,
                h: data[0].h,
                matched: g.len(),
                min_overlap: 1.0,
                mean: mean(&values),
                spread: spread(&values),
                values,
            }],
            richardson: None,
            errors: Vec::new(),
            ratios: Vec::new(),
            self_ratios: Vec::new(),
            oracle: None,
            oracle_rel_error: None,
        });
    }

    let mut ambiguities = Vec::new();
    for l in 1..data.len() {
        let p = nested_prolongation(&h, l - 1, l);
        let fine = &data[l];
        let mut scored: Vec<(f64, usize, usize)> = Vec::new();
        for (m, mem) in members.iter().enumerate() {
            if mem.is_empty() {
                continue;
            }
            let q = orthonormal(&fine.x, mem.iter().map(|&i| p.mul_vec(&data[l - 1].cands[i].u)).collect());
            for (j, c) in fine.cands.iter().enumerate() {
                let o = overlap(&fine.x, &q, &c.u);
                if o >= cfg.overlap_min {
                    scored.push((o, m, j));
                }
            }
        }
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut taken = vec![false; fine.cands.len()];
        let mut next: Vec<Vec<(usize, f64)>> = vec![Vec::new(); members.len()];
        for &(o, m, j) in &scored {
            if !taken[j] && next[m].len() < modes[m].size {
                taken[j] = true;
                next[m].push((j, o));
            }
        }
        for (m, got) in next.iter().enumerate() {
            if members[m].is_empty() {
                continue;
            }
            let contested = scored.iter().filter(|s| s.1 != m && got.iter().any(|g| g.0 == s.2)).count();
            if got.len() < modes[m].size || contested > 0 {
                let msg = format!(
                    "mode {m} at level {l}: {} of {} eigenvector(s) matched with overlap >= {}{}",
                    got.len(),
                    modes[m].size,
                    cfg.overlap_min,
                    if contested > 0 { format!(", {contested} also claimed by another mode") } else { String::new() }
                );
                ambiguities.push(msg);
            }
            members[m] = got.iter().map(|g| g.0).collect();
            if got.is_empty() {
                continue;
            }
            let mut idx: Vec<usize> = members[m].clone();
            idx.sort_unstable();
            let values: Vec<C64> = idx.iter().map(|&j| fine.cands[j].lambda).collect();
            modes[m].levels.push(TrackedLevel {
                level: l,
                n_edges: fine.n_edges,
                h: fine.h,
                matched: got.len(),
                min_overlap: got.iter().map(|g| g.1).fold(1.0, f64::min),
                mean: mean(&values),
                spread: spread(&values),
                values,
            });
        }
    }

    let oracle_pool: Option<Vec<(f64, usize)>> = match (&cfg.geometry, cfg.scalar_real_materials()) {
        (Geometry::Ball { .. }, Some(_)) => {
            let oc = oracle_config(cfg)?;
            Some(if cfg.problem == Problem::Original {
                let s = original_ball_sequences(&oc)?;
                s.toward_zero.iter().chain(&s.toward_infinity).map(|e| (e.lambda, e.multiplicity)).collect()
            } else {
                modified_ball_eigenvalues(&oc)?.iter().map(|e| (e.lambda, e.multiplicity)).collect()
            })
        }
        _ => None,
    };

    for mode in modes.iter_mut() {
        let mu: Vec<C64> = mode.levels.iter().map(|t| t.mean).collect();
        let n = mu.len();
        if n >= 2 {
            // second-order extrapolation from the two finest levels
            let r = mu[n - 1] + (mu[n - 1] - mu[n - 2]) / 3.0;
            mode.richardson = Some(r);
            mode.errors = mu.iter().map(|m| (m - r).norm() / r.norm()).collect();
            if let Some(pool) = &oracle_pool {
                let best = pool.iter().min_by(|a, b| (a.0 - r.re).abs().total_cmp(&(b.0 - r.re).abs())).copied();
                mode.oracle = best;
                mode.oracle_rel_error = best.map(|(v, _)| (r - v).norm() / v.abs());
            }
        }
        mode.ratios = (0..n).map(|k| (k >= 1).then(|| mode.errors[k - 1] / mode.errors[k])).collect();
        mode.self_ratios =
            (0..n).map(|k| (k >= 2).then(|| (mu[k - 1] - mu[k - 2]).norm() / (mu[k] - mu[k - 1]).norm())).collect();
    }

    let mut csv = String::from(
        "mode,level,n_edges,h,size,matched,min_overlap,re_lambda,im_lambda,spread,error,ratio,self_ratio,\
         re_richardson,im_richardson,oracle,oracle_multiplicity,oracle_rel_error,status\n",
    );
    for mode in &modes {
        for (k, t) in mode.levels.iter().enumerate() {
            let status = if t.matched < mode.size { "ambiguous" } else { "ok" };
            let _ = writeln!(
                csv,
                "{},{},{},{:.6e},{},{},{:.6},{:.17e},{:.17e},{:.6e},{},{},{},{},{},{},{},{},{}",
                mode.mode,
                t.level,
                t.n_edges,
                t.h,
                mode.size,
                t.matched,
                t.min_overlap,
                t.mean.re,
                t.mean.im,
                t.spread,
                opt(mode.errors.get(k).copied()),
                opt(mode.ratios.get(k).copied().flatten()),
                opt(mode.self_ratios.get(k).copied().flatten()),
                opt(mode.richardson.map(|r| r.re)),
                opt(mode.richardson.map(|r| r.im)),
                opt(mode.oracle.map(|o| o.0)),
                mode.oracle.map_or(String::new(), |o| o.1.to_string()),
                opt(mode.oracle_rel_error),
                status
            );
        }
    }
    let path = out_path(cfg, "study.csv")?;
    write_csv(&path, cfg, &csv)?;
    let manifest = out_path(cfg, "study.json")?;
    write_manifest(
        &manifest,
        cfg,
        "stekloff.study/1",
        serde_json::json!({ "modes": modes, "ambiguities": ambiguities }),
    )?;
    for mode in &modes {
        let last = mode.levels.last().unwrap();
        lines.push(format!(
            "mode {} (x{}): {:.6} after {} level(s), ratios {}",
            mode.mode,
            mode.size,
            last.mean,
            mode.levels.len(),
            mode.ratios.iter().flatten().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(" ")
        ));
    }
    for a in &ambiguities {
        lines.push(format!("ambiguous: {a}"));
    }
    lines.push(format!("wrote {}", path.display()));
    lines.push(format!("wrote {}", manifest.display()));
    Ok(lines)
}
