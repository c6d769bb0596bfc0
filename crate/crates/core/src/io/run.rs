//! Run orchestration: problem setup, the load loop with its writers, and
//! the run artifact.

use std::path::{Path, PathBuf};

use nalgebra::Vector2;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{serialize_config, OutputFormat, SimulationConfig};
use super::curve::write_load_curve;
use super::vtk::write_snapshot;
use super::{write_atomic, OutputError};
use crate::fem::Discretization;
use crate::solver::{dnbd_problem, simulate, Problem, SolverError, StepRecord, Termination};

pub fn build_problem(config: &SimulationConfig) -> Result<Problem, SolverError> {
    let card = config
        .material
        .card()
        .map_err(|e| SolverError::InvalidConfig(e.to_string()))?;
    let g = &config.geometry;
    match (&g.dnbd, &g.csg) {
        (Some(d), _) => dnbd_problem(
            d,
            &config.mesh,
            card,
            config.solver.clone(),
            g.thickness,
            g.top_arc,
        ),
        (None, Some(c)) => {
            config.mesh.validate()?;
            let em = config.mesh.mesh_for(&c.shape)?;
            let disc = Discretization::new(
                em,
                &c.shape,
                config.mesh.depth,
                config.mesh.order(),
                config.solver.alpha_fict,
            )?;
            let [dx, dy] = c.load_direction;
            Problem::new(
                disc,
                c.shape.clone(),
                card,
                config.solver.clone(),
                c.supports.clone(),
                Vector2::new(dx, dy),
                g.thickness,
            )
        }
        (None, None) => Err(SolverError::InvalidConfig(
            "geometry block has neither dnbd nor csg".into(),
        )),
    }
}

/// SHA-256 of the normalized configuration text, hex.
pub fn config_hash(config: &SimulationConfig) -> String {
    Sha256::digest(serialize_config(config).as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnapshotEntry {
    pub step: usize,
    pub displacement_mm: f64,
    pub file: String,
}

#[derive(Debug, Clone)]
pub struct RunArtifact {
    pub series: Vec<StepRecord>,
    pub snapshots: Vec<SnapshotEntry>,
    /// Normalized configuration text, also written as `config.toml`.
    pub config_echo: String,
    pub version: &'static str,
    pub config_hash: String,
    pub timestamp: String,
    pub termination: Termination,
}

impl RunArtifact {
    pub fn peak(&self) -> Option<&StepRecord> {
        self.series
            .iter()
            .max_by(|a, b| a.force.total_cmp(&b.force))
    }
}

#[derive(Serialize)]
struct ArtifactFile<'a> {
    version: &'a str,
    config_sha256: &'a str,
    timestamp: &'a str,
    termination: &'a str,
    steps: usize,
    #[serde(rename = "peak_force_kN")]
    peak_force: f64,
    peak_displacement_mm: f64,
    config: &'a str,
    load_curve: Option<&'a str>,
    snapshot: &'a [SnapshotEntry],
}

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::TargetReached => "target_reached",
        Termination::Failure => "failure",
        Termination::MaxSteps => "max_steps",
    }
}

fn now_rfc3339() -> String {
    time::OffsetDateTime::now_utc()
        .format(&time::format_description::well_known::Rfc3339)
        .unwrap_or_else(|_| "unknown".into())
}

fn out_err(e: OutputError) -> SolverError {
    SolverError::Output(e.to_string())
}

/// Runs the configured simulation, writing snapshots, the load curve,
/// `config.toml` and `run.toml` into `directory`.
pub fn run_simulation(
    config: &SimulationConfig,
    directory: &Path,
) -> Result<RunArtifact, SolverError> {
    std::fs::create_dir_all(directory)
        .map_err(|e| SolverError::Output(format!("{}: {e}", directory.display())))?;
    let echo = serialize_config(config);
    write_atomic(&directory.join("config.toml"), echo.as_bytes()).map_err(out_err)?;
    let mut problem = build_problem(config)?;

    let out = &config.output;
    let vtk = out.wants(OutputFormat::Vtk);
    let curve_path: Option<PathBuf> = out
        .wants(OutputFormat::Csv)
        .then(|| directory.join("load_curve.csv"));
    let mut snapshots: Vec<SnapshotEntry> = Vec::new();
    let snapshot = |state: &crate::solver::SimulationState, problem: &Problem, step: usize| {
        let file = format!("snapshot_{step:05}.vtk");
        write_snapshot(
            problem,
            state,
            out.samples_per_element,
            &directory.join(&file),
        )
        .map_err(out_err)?;
        Ok::<_, SolverError>(SnapshotEntry {
            step,
            displacement_mm: state.displacement,
            file,
        })
    };

    let outcome = {
        let mut observer =
            |rec: &StepRecord, state: &crate::solver::SimulationState, problem: &Problem| {
                if let Some(path) = &curve_path {
                    write_load_curve(&state.steps, path).map_err(out_err)?;
                }
                if vtk && out.snapshot_every > 0 && rec.step.is_multiple_of(out.snapshot_every) {
                    snapshots.push(snapshot(state, problem, rec.step)?);
                }
                Ok(())
            };
        simulate(&mut problem, &config.loading, &mut observer)?
    };
    let last = outcome.state.steps.len() - 1;
    if vtk && snapshots.last().map(|s| s.step) != Some(last) {
        snapshots.push(snapshot(&outcome.state, &problem, last)?);
    }

    let artifact = RunArtifact {
        series: outcome.state.steps.clone(),
        snapshots,
        config_echo: echo,
        version: env!("CARGO_PKG_VERSION"),
        config_hash: config_hash(config),
        timestamp: now_rfc3339(),
        termination: outcome.termination,
    };
    let peak = artifact
        .peak()
        .copied()
        .expect("the zero step is always recorded");
    let file = ArtifactFile {
        version: artifact.version,
        config_sha256: &artifact.config_hash,
        timestamp: &artifact.timestamp,
        termination: termination_name(artifact.termination),
        steps: artifact.series.len(),
        peak_force: peak.force,
        peak_displacement_mm: peak.displacement,
        config: "config.toml",
        load_curve: curve_path.as_ref().map(|_| "load_curve.csv"),
        snapshot: &artifact.snapshots,
    };
    let text = toml::to_string(&file).map_err(|e| SolverError::Output(e.to_string()))?;
    write_atomic(&directory.join("run.toml"), text.as_bytes()).map_err(out_err)?;
    Ok(artifact)
}
