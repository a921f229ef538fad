//! Minimal OBJ subset loader: `v x y z` and `f i j k` lines only (1-based
//! indices). Anything else is rejected with a line-numbered error.

use std::path::Path;

use crate::math::Vec3f;

use super::{GeomError, TriMesh};

/// Parse OBJ text into raw vertices and faces.
pub fn parse_obj(text: &str) -> Result<(Vec<Vec3f>, Vec<[u32; 3]>), GeomError> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let kind = tokens.next().unwrap();
        match kind {
            "v" => {
                let mut coords = [0.0f64; 3];
                for c in coords.iter_mut() {
                    let tok = tokens.next().ok_or_else(|| GeomError::ObjParse {
                        line: line_no,
                        message: "vertex needs 3 coordinates".into(),
                    })?;
                    *c = tok.parse().map_err(|_| GeomError::ObjParse {
                        line: line_no,
                        message: format!("bad coordinate '{tok}'"),
                    })?;
                }
                if tokens.next().is_some() {
                    return Err(GeomError::ObjParse {
                        line: line_no,
                        message: "vertex has more than 3 coordinates".into(),
                    });
                }
                vertices.push(Vec3f::new(coords[0], coords[1], coords[2]));
            }
            "f" => {
                let mut idxs = [0u32; 3];
                for v in idxs.iter_mut() {
                    let tok = tokens.next().ok_or_else(|| GeomError::ObjParse {
                        line: line_no,
                        message: "face needs 3 indices".into(),
                    })?;
                    let one_based: i64 = tok.parse().map_err(|_| GeomError::ObjParse {
                        line: line_no,
                        message: format!("bad index '{tok}' (only plain 1-based indices)"),
                    })?;
                    if one_based < 1 {
                        return Err(GeomError::ObjParse {
                            line: line_no,
                            message: format!("index {one_based} out of range (1-based)"),
                        });
                    }
                    *v = (one_based - 1) as u32;
                }
                if tokens.next().is_some() {
                    return Err(GeomError::ObjParse {
                        line: line_no,
                        message: "only triangle faces are supported".into(),
                    });
                }
                faces.push(idxs);
            }
            other => {
                return Err(GeomError::ObjParse {
                    line: line_no,
                    message: format!("unsupported line kind '{other}'"),
                });
            }
        }
    }
    Ok((vertices, faces))
}

/// Load and validate a mesh from a minimal OBJ file.
pub fn load_obj(path: &Path) -> Result<TriMesh, GeomError> {
    let text = std::fs::read_to_string(path)?;
    let (vertices, faces) = parse_obj(&text)?;
    TriMesh::new(vertices, faces)
}

/// Write a mesh in the same minimal subset.
pub fn write_obj(mesh: &TriMesh) -> String {
    let mut out = String::new();
    for v in mesh.vertices() {
        out.push_str(&format!("v {} {} {}\n", v.x, v.y, v.z));
    }
    for f in mesh.faces() {
        out.push_str(&format!("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1));
    }
    out
}
