//! Quasi-static driver: staggered iteration and adaptive load stepping.

mod config;
mod problem;
mod simulate;
mod staggered;

pub use config::{
    next_step_size, LoadSchedule, LoadStepper, NonConvergencePolicy, StaggeredConfig,
    StepErrorSource,
};
pub use problem::{dnbd_problem, homogeneous_patch, MeshSpec, Problem, TopArcConstraint};
pub use simulate::{simulate, SimulationOutcome, StepObserver, Termination};
pub use staggered::{staggered_solve, SimulationState, StaggeredOutcome, StepRecord};

use crate::fem::FemError;
use crate::geometry::GeometryError;
use crate::material::MaterialError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("staggered iteration did not converge in {iterations} iterations (residuals u, s_I, s_II = {residuals:?})")]
    NonConvergence {
        iterations: usize,
        residuals: [f64; 3],
    },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Fem(#[from] FemError),
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("output: {0}")]
    Output(String),
}
