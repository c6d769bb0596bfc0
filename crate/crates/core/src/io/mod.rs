//! Configuration, run orchestration, output writers and the command line.

pub mod cli;
mod config;
mod curve;
mod run;
mod vtk;

pub use config::{
    parse_config, serialize_config, CsgSpecimen, GeometryBlock, MaterialBlock, OutputBlock,
    OutputFormat, SimulationConfig,
};
pub use curve::{format_load_curve, write_load_curve};
pub use run::{build_problem, config_hash, run_simulation, RunArtifact, SnapshotEntry};
pub use vtk::{format_snapshot, read_vtk, write_snapshot, SnapshotGrid, VtkDataset};

use std::path::Path;

/// Configuration error located by its dotted key path.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{}{reason}", if path.is_empty() { String::new() } else { format!("{path}: ") })]
pub struct SchemaError {
    pub path: String,
    pub reason: String,
}

impl SchemaError {
    pub fn new(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("load curve out of order at row {0}")]
    Unordered(usize),
    #[error("empty load curve")]
    Empty,
    #[error("malformed VTK: {0}")]
    Vtk(String),
}

/// Writes `contents` next to `path` and renames it into place.
pub(crate) fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), OutputError> {
    use std::io::Write;
    let io = |source| OutputError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
