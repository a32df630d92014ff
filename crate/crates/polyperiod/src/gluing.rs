//! JSON form of square-tiled gluings.
//!
//! ```json
//! {"squares": 1, "glue": [
//!   {"from": [0, "N"], "to": [0, "S"], "kind": "translation"},
//!   {"from": [0, "E"], "to": [0, "W"], "kind": "translation"}
//! ]}
//! ```

use std::path::Path;

use polyperiod_core::surfaces::{GlueKind, GluingSpec, Identification, Side};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum GluingError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("malformed gluing file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("glue entry {entry}: {message}")]
    Entry { entry: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] polyperiod_core::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GluingFile {
    squares: usize,
    glue: Vec<GlueEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GlueEntry {
    from: (usize, String),
    to: (usize, String),
    kind: String,
}

fn side(entry: usize, s: &str) -> Result<Side, GluingError> {
    s.parse().map_err(|_| GluingError::Entry {
        entry,
        message: format!("unknown side `{s}` (expected N, E, S or W)"),
    })
}

/// Parses and validates a gluing.
pub fn parse_gluing(text: &str) -> Result<GluingSpec, GluingError> {
    let file: GluingFile = serde_json::from_str(text)?;
    let mut identifications = Vec::with_capacity(file.glue.len());
    for (k, e) in file.glue.iter().enumerate() {
        let kind: GlueKind = e.kind.parse().map_err(|_| GluingError::Entry {
            entry: k,
            message: format!("unknown kind `{}` (expected translation or half_turn)", e.kind),
        })?;
        identifications.push(Identification::new(
            (e.from.0, side(k, &e.from.1)?),
            (e.to.0, side(k, &e.to.1)?),
            kind,
        ));
    }
    let spec = GluingSpec {
        squares: file.squares,
        identifications,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn load_gluing(path: &Path) -> Result<GluingSpec, GluingError> {
    parse_gluing(&std::fs::read_to_string(path)?)
}

/// One identification per line, so diffs of data files stay readable.
pub fn gluing_to_json(spec: &GluingSpec) -> String {
    let entries: Vec<String> = spec
        .identifications
        .iter()
        .map(|id| {
            serde_json::to_string(&GlueEntry {
                from: (id.from.0, id.from.1.to_string()),
                to: (id.to.0, id.to.1.to_string()),
                kind: id.kind.to_string(),
            })
            .expect("glue entries serialize")
        })
        .collect();
    format!(
        "{{\"squares\": {}, \"glue\": [\n  {}\n]}}\n",
        spec.squares,
        entries.join(",\n  ")
    )
}
