//! Wavefront OBJ subset: `v x y z` and triangular `f i j k` records.
//!
//! Indices are 1-based. Face tokens of the form `i/t/n` use only the vertex
//! index. Every other record type (normals, texture coordinates, groups,
//! materials, ...) is skipped.

use std::io::{self, BufRead, Write};
use std::path::Path;

use polyperiod_core::mesh::EmbeddedMesh;
use polyperiod_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum ObjError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    /// The records parsed but do not describe a valid closed surface.
    #[error("{}{source}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Mesh {
        line: Option<usize>,
        #[source]
        source: CoreError,
    },
}

impl ObjError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ObjError::Io(_) => None,
            ObjError::Parse { line, .. } => Some(*line),
            ObjError::Mesh { line, .. } => *line,
        }
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> ObjError {
    ObjError::Parse {
        line,
        message: message.into(),
    }
}

/// Reads a closed triangle mesh from OBJ text.
pub fn read_obj(reader: impl BufRead) -> Result<EmbeddedMesh, ObjError> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    let mut face_lines = Vec::new();
    let mut name = None;
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = k + 1;
        let content = line.split('#').next().unwrap_or("");
        let mut tokens = content.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let coords: Vec<&str> = tokens.collect();
                if coords.len() < 3 || coords.len() > 4 {
                    return Err(parse_error(
                        lineno,
                        format!("vertex record needs 3 coordinates, found {}", coords.len()),
                    ));
                }
                let mut p = [0.0; 3];
                for (slot, tok) in p.iter_mut().zip(&coords) {
                    *slot = tok
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| parse_error(lineno, format!("invalid coordinate `{tok}`")))?;
                }
                vertices.push(p);
            }
            Some("f") => {
                let refs: Vec<&str> = tokens.collect();
                if refs.len() != 3 {
                    return Err(parse_error(
                        lineno,
                        format!("non-triangular face with {} vertices", refs.len()),
                    ));
                }
                let mut face = [0usize; 3];
                for (slot, tok) in face.iter_mut().zip(&refs) {
                    let index = tok.split('/').next().unwrap_or("");
                    let i: usize = index
                        .parse()
                        .map_err(|_| parse_error(lineno, format!("invalid vertex index `{tok}`")))?;
                    if i == 0 {
                        return Err(parse_error(lineno, "vertex indices are 1-based"));
                    }
                    *slot = i - 1;
                }
                faces.push(face);
                face_lines.push(lineno);
            }
            Some("o") if name.is_none() => {
                let rest: Vec<&str> = tokens.collect();
                if !rest.is_empty() {
                    name = Some(rest.join(" "));
                }
            }
            _ => {}
        }
    }
    let mesh = EmbeddedMesh::new(vertices, faces).map_err(|source| {
        let line = match &source {
            CoreError::DegenerateFace { face } | CoreError::InvalidVertexIndex { face, .. } => {
                face_lines.get(*face).copied()
            }
            _ => None,
        };
        ObjError::Mesh { line, source }
    })?;
    Ok(match name {
        Some(n) => mesh.with_name(n),
        None => mesh,
    })
}

pub fn load_obj(path: &Path) -> Result<EmbeddedMesh, ObjError> {
    let file = std::fs::File::open(path)?;
    let mesh = read_obj(io::BufReader::new(file))?;
    if mesh.name().is_some() {
        return Ok(mesh);
    }
    Ok(match path.file_stem().and_then(|s| s.to_str()) {
        Some(stem) => mesh.with_name(stem),
        None => mesh,
    })
}

/// Writes `mesh` as OBJ. Coordinates use the shortest decimal form that
/// parses back to the same `f64`.
pub fn write_obj(mesh: &EmbeddedMesh, mut out: impl Write) -> io::Result<()> {
    if let Some(name) = mesh.name() {
        writeln!(out, "o {name}")?;
    }
    for [x, y, z] in mesh.vertices() {
        writeln!(out, "v {x:?} {y:?} {z:?}")?;
    }
    for [a, b, c] in mesh.faces() {
        writeln!(out, "f {} {} {}", a + 1, b + 1, c + 1)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TETRAHEDRON: &str = "\
# regular tetrahedron
v 1 1 1
v 1 -1 -1
v -1 1 -1
v -1 -1 1
vn 0 0 1
f 1 2 3
f 1 3 4
f 1 4 2
f 2 4 3
";

    #[test]
    fn tetrahedron_loads() {
        let mesh = read_obj(TETRAHEDRON.as_bytes()).unwrap();
        let t = mesh.topology_report();
        assert_eq!((t.vertex_count, t.edge_count, t.face_count), (4, 6, 4));
        assert_eq!((t.euler_characteristic, t.genus), (2, 0));
    }

    #[test]
    fn slashed_indices_and_comments() {
        let text = TETRAHEDRON
            .replace("f 1 2 3", "f 1/1/1 2/2/2 3//3 # first")
            .replace("vn 0 0 1", "vt 0.5 0.5\ng group\nusemtl foo");
        assert_eq!(read_obj(text.as_bytes()).unwrap().faces().len(), 4);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let degenerate = TETRAHEDRON.replace("f 1 3 4", "f 1 2 2");
        let err = read_obj(degenerate.as_bytes()).unwrap_err();
        assert_eq!(err.line(), Some(8));
        assert!(err.to_string().contains("degenerate face"), "{err}");

        let quad = TETRAHEDRON.replace("f 1 3 4", "f 1 3 4 2");
        let err = read_obj(quad.as_bytes()).unwrap_err();
        assert_eq!(err.line(), Some(8));
        assert!(err.to_string().contains("non-triangular"), "{err}");

        let bad = TETRAHEDRON.replace("v 1 -1 -1", "v 1 x -1");
        assert_eq!(read_obj(bad.as_bytes()).unwrap_err().line(), Some(3));

        let zero = TETRAHEDRON.replace("f 2 4 3", "f 0 4 3");
        assert_eq!(read_obj(zero.as_bytes()).unwrap_err().line(), Some(10));

        let missing = TETRAHEDRON.replace("f 2 4 3", "f 2 4 9");
        assert_eq!(read_obj(missing.as_bytes()).unwrap_err().line(), Some(10));
    }

    #[test]
    fn open_and_flipped_meshes_are_rejected() {
        let open = TETRAHEDRON.replace("f 2 4 3\n", "");
        assert!(matches!(
            read_obj(open.as_bytes()),
            Err(ObjError::Mesh {
                source: CoreError::NonManifoldEdge { .. },
                ..
            })
        ));
        let flipped = TETRAHEDRON.replace("f 2 4 3", "f 2 3 4");
        assert!(matches!(
            read_obj(flipped.as_bytes()),
            Err(ObjError::Mesh {
                source: CoreError::InconsistentOrientation { .. },
                ..
            })
        ));
    }

    #[test]
    fn round_trip() {
        let mesh = EmbeddedMesh::torus_of_revolution(6, 4, 2.0, 0.7)
            .unwrap()
            .with_name("ring");
        let mut buf = Vec::new();
        write_obj(&mesh, &mut buf).unwrap();
        let back = read_obj(buf.as_slice()).unwrap();
        assert_eq!(back, mesh);
    }
}
