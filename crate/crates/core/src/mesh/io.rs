//! Gmsh MSH 2.2 (ASCII) input and a small JSON mesh format.
//!
//! JSON meshes look like `{"vertices":[[x,y,z],...],"tets":[[a,b,c,d],...]}`
//! with zero-based indices. Writing and re-reading is byte-for-byte stable.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Geometry, Mesh};
use crate::error::{Error, MeshError};

#[derive(Serialize, Deserialize)]
struct JsonMesh {
    vertices: Vec<[f64; 3]>,
    tets: Vec<[usize; 4]>,
}

pub fn mesh_to_json(mesh: &Mesh) -> String {
    serde_json::to_string(&JsonMesh { vertices: mesh.vertices.clone(), tets: mesh.tets.clone() })
        .expect("mesh serializes")
}

pub fn mesh_from_json(text: &str) -> Result<Mesh, MeshError> {
    let j: JsonMesh = serde_json::from_str(text).map_err(|e| MeshError::Json(e.to_string()))?;
    Mesh::new(j.vertices, j.tets, Geometry::Polyhedral)
}

pub fn write_json(mesh: &Mesh, path: impl AsRef<Path>) -> Result<(), Error> {
    std::fs::write(path, mesh_to_json(mesh))?;
    Ok(())
}

pub fn read_json(path: impl AsRef<Path>) -> Result<Mesh, Error> {
    Ok(mesh_from_json(&std::fs::read_to_string(path)?)?)
}

/// ASCII MSH 2.2 with 1-based node ids and one type-4 element per tetrahedron.
pub fn mesh_to_msh(mesh: &Mesh) -> String {
    use std::fmt::Write;
    let mut out = String::from("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n");
    let _ = writeln!(out, "{}", mesh.n_vertices());
    for (i, v) in mesh.vertices.iter().enumerate() {
        let _ = writeln!(out, "{} {:e} {:e} {:e}", i + 1, v[0], v[1], v[2]);
    }
    let _ = writeln!(out, "$EndNodes\n$Elements\n{}", mesh.n_tets());
    for (i, t) in mesh.tets.iter().enumerate() {
        let _ = writeln!(out, "{} 4 2 0 1 {} {} {} {}", i + 1, t[0] + 1, t[1] + 1, t[2] + 1, t[3] + 1);
    }
    out.push_str("$EndElements\n");
    out
}

pub fn read_msh(path: impl AsRef<Path>) -> Result<Mesh, Error> {
    Ok(parse_msh(&std::fs::read_to_string(path)?)?)
}

/// Lower-dimensional elements (points, lines, triangles, quads) are skipped;
/// any volume element other than the 4-node tetrahedron is rejected.
fn element_dim(t: u32) -> Option<u32> {
    match t {
        15 => Some(0),
        1 | 8 | 26 | 27 | 28 => Some(1),
        2 | 3 | 9 | 10 | 16 | 20 | 21 | 22 | 23 | 24 | 25 => Some(2),
        _ => None,
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next_nonempty(&mut self) -> Option<(usize, &'a str)> {
        for (i, l) in self.inner.by_ref() {
            let l = l.trim();
            self.last = i + 1;
            if !l.is_empty() {
                return Some((i + 1, l));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), MeshError> {
        self.next_nonempty().ok_or_else(|| MeshError::MalformedHeader {
            line: self.last + 1,
            msg: format!("unexpected end of file, expected {what}"),
        })
    }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, MeshError> {
    let tok = tok.ok_or_else(|| MeshError::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| MeshError::Parse { line, msg: format!("invalid {what} '{tok}'") })
}

pub fn parse_msh(text: &str) -> Result<Mesh, MeshError> {
    let mut lines = Lines { inner: text.lines().enumerate(), last: 0 };
    let (ln, head) = lines.expect("$MeshFormat")?;
    if head != "$MeshFormat" {
        return Err(MeshError::MalformedHeader { line: ln, msg: format!("expected $MeshFormat, found '{head}'") });
    }
    let (ln, fmt) = lines.expect("format line")?;
    let mut it = fmt.split_whitespace();
    let version = it.next().unwrap_or("");
    let file_type = it.next().unwrap_or("");
    if !version.starts_with("2.") {
        return Err(MeshError::MalformedHeader { line: ln, msg: format!("unsupported MSH version '{version}'") });
    }
    if file_type != "0" {
        return Err(MeshError::MalformedHeader { line: ln, msg: "only ASCII MSH files are supported".into() });
    }
    let (ln, end) = lines.expect("$EndMeshFormat")?;
    if end != "$EndMeshFormat" {
        return Err(MeshError::MalformedHeader { line: ln, msg: format!("expected $EndMeshFormat, found '{end}'") });
    }

    let mut node_ids: HashMap<usize, usize> = HashMap::new();
    let mut vertices: Vec<[f64; 3]> = Vec::new();
    let mut tets: Vec<[usize; 4]> = Vec::new();
    let mut saw_nodes = false;
    let mut saw_elements = false;

    while let Some((ln, section)) = lines.next_nonempty() {
        match section {
            "$Nodes" => {
                let (cl, count) = lines.expect("node count")?;
                let n: usize = parse_num(Some(count), cl, "node count")?;
                for _ in 0..n {
                    let (l, row) = lines.expect("node line")?;
                    let mut it = row.split_whitespace();
                    let id: usize = parse_num(it.next(), l, "node id")?;
                    let x: f64 = parse_num(it.next(), l, "x coordinate")?;
                    let y: f64 = parse_num(it.next(), l, "y coordinate")?;
                    let z: f64 = parse_num(it.next(), l, "z coordinate")?;
                    node_ids.insert(id, vertices.len());
                    vertices.push([x, y, z]);
                }
                let (l, e) = lines.expect("$EndNodes")?;
                if e != "$EndNodes" {
                    return Err(MeshError::MalformedHeader { line: l, msg: format!("expected $EndNodes, found '{e}'") });
                }
                saw_nodes = true;
            }
            "$Elements" => {
                let (cl, count) = lines.expect("element count")?;
                let n: usize = parse_num(Some(count), cl, "element count")?;
                for _ in 0..n {
                    let (l, row) = lines.expect("element line")?;
                    let mut it = row.split_whitespace();
                    let _id: usize = parse_num(it.next(), l, "element id")?;
                    let ty: u32 = parse_num(it.next(), l, "element type")?;
                    let ntags: usize = parse_num(it.next(), l, "tag count")?;
                    for _ in 0..ntags {
                        let _: i64 = parse_num(it.next(), l, "tag")?;
                    }
                    if ty != 4 {
                        if element_dim(ty).is_some() {
                            continue;
                        }
                        return Err(MeshError::UnsupportedElement { line: l, element_type: ty });
                    }
                    let mut tet = [0usize; 4];
                    for slot in tet.iter_mut() {
                        let id: usize = parse_num(it.next(), l, "node reference")?;
                        *slot = *node_ids
                            .get(&id)
                            .ok_or(MeshError::IndexOutOfRange { line: l, index: id })?;
                    }
                    tets.push(tet);
                }
                let (l, e) = lines.expect("$EndElements")?;
                if e != "$EndElements" {
                    return Err(MeshError::MalformedHeader { line: l, msg: format!("expected $EndElements, found '{e}'") });
                }
                saw_elements = true;
            }
            s if s.starts_with('$') && !s.starts_with("$End") => {
                // skip unknown sections such as $PhysicalNames
                let tag = format!("$End{}", &s[1..]);
                loop {
                    let (_, l) = lines.expect(&tag)?;
                    if l == tag {
                        break;
                    }
                }
            }
            other => {
                return Err(MeshError::MalformedHeader { line: ln, msg: format!("unexpected line '{other}'") });
            }
        }
    }
    if !saw_nodes || !saw_elements {
        return Err(MeshError::MalformedHeader {
            line: lines.last,
            msg: "missing $Nodes or $Elements section".into(),
        });
    }
    Mesh::new(vertices, tets, Geometry::Polyhedral)
}
