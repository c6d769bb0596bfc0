//! Embedding mesh, hierarchic basis, assembly of the three weak forms and
//! the sparse linear solve.

mod assembly;
mod basis;
mod boundary;
mod discretization;
mod mesh;
mod sparse;

pub use assembly::{
    add_boundary_mass, assemble_elastic, assemble_phase, reaction_force, PhaseMode,
};
pub use basis::{shape_basis, tensor_basis, TensorBasis, MAX_DEGREE};
pub use boundary::{
    boundary_quadrature, BoundaryPath, BoundaryPoint, DirichletArc, PenaltyBoundary,
};
pub use discretization::{Discretization, QuadPoint};
pub use mesh::{DofMap, EmbeddingMesh};
pub use sparse::{
    norm, Field, LinearSystem, SolveReport, SparsePattern, SparseSolver, SymmetricMatrix,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FemError {
    #[error("polynomial degree {0} not supported (1..=4)")]
    UnsupportedDegree(usize),
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degradation field has {got} values, expected one per quadrature point ({expected})")]
    MissingDegradation { expected: usize, got: usize },
    #[error("linear solver: {0}")]
    Solver(String),
}
