//! Everything a staggered solve needs besides the evolving state.

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use super::config::StaggeredConfig;
use super::SolverError;
use crate::fem::{
    reaction_force, BoundaryPath, DirichletArc, Discretization, EmbeddingMesh, PenaltyBoundary,
    SparseSolver,
};
use crate::geometry::{DnbdGeometry, ImplicitShape, Point};
use crate::material::MaterialCard;

/// Mesh resolution and integration settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeshSpec {
    pub nx: usize,
    pub ny: usize,
    pub p: usize,
    /// Uniform refinement: element counts are multiplied by this factor.
    pub refinement: usize,
    /// Quadtree depth on cut elements.
    pub depth: usize,
    /// Gauss points per direction on each leaf; `p + 1` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_order: Option<usize>,
    /// Gap between the shape's bounding box and the mesh box, mm.
    pub margin: f64,
}

impl Default for MeshSpec {
    fn default() -> Self {
        Self {
            nx: 25,
            ny: 25,
            p: 3,
            refinement: 1,
            depth: 3,
            quad_order: None,
            margin: 1.0,
        }
    }
}

impl MeshSpec {
    pub fn order(&self) -> usize {
        self.quad_order.unwrap_or(self.p + 1)
    }

    pub fn counts(&self) -> (usize, usize) {
        (self.nx * self.refinement, self.ny * self.refinement)
    }

    /// Mesh over the bounding box of `shape` grown by the margin.
    pub fn mesh_for(&self, shape: &ImplicitShape) -> Result<EmbeddingMesh, SolverError> {
        let bbox = shape
            .bounding_box()
            .ok_or_else(|| SolverError::InvalidConfig("shape is unbounded".into()))?;
        let (nx, ny) = self.counts();
        Ok(EmbeddingMesh::covering(&bbox, self.margin, nx, ny, self.p)?)
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: String| Err(SolverError::InvalidConfig(m));
        if self.nx == 0 || self.ny == 0 {
            return bad(format!(
                "element counts must be >= 1, got {} x {}",
                self.nx, self.ny
            ));
        }
        if !(1..=crate::fem::MAX_DEGREE).contains(&self.p) {
            return bad(format!("p = {} not supported (1..=4)", self.p));
        }
        if self.refinement == 0 {
            return bad("refinement must be >= 1".into());
        }
        if self.quad_order == Some(0) {
            return bad("quad_order must be >= 1".into());
        }
        if !(self.margin >= 0.0) {
            return bad(format!("margin must be >= 0, got {}", self.margin));
        }
        Ok(())
    }
}

/// Assembly context: discretization, material, boundary data and the
/// factorization caches.
#[derive(Debug)]
pub struct Problem {
    pub disc: Discretization,
    pub card: MaterialCard,
    pub config: StaggeredConfig,
    pub shape: ImplicitShape,
    pub boundaries: Vec<PenaltyBoundary>,
    /// Prescribed values per unit load (start, end) for each boundary.
    unit_values: Vec<([f64; 2], Option<[f64; 2]>)>,
    /// Direction along which the reaction is measured.
    pub load_direction: Vector2<f64>,
    /// Out-of-plane thickness turning 2D reactions into forces, mm.
    pub thickness: f64,
    pub(crate) scalar_solver: SparseSolver,
    pub(crate) vector_solver: SparseSolver,
}

impl Problem {
    /// `arcs` carry prescribed values per unit load; arcs with all-zero
    /// values are fixed supports and do not enter the reaction.
    pub fn new(
        disc: Discretization,
        shape: ImplicitShape,
        card: MaterialCard,
        config: StaggeredConfig,
        arcs: Vec<DirichletArc>,
        load_direction: Vector2<f64>,
        thickness: f64,
    ) -> Result<Self, SolverError> {
        card.validate()?;
        config.validate()?;
        if !(thickness > 0.0) {
            return Err(SolverError::InvalidConfig(format!(
                "thickness must be positive, got {thickness}"
            )));
        }
        let unit_values = arcs.iter().map(|a| (a.value, a.value_end)).collect();
        let boundaries = arcs
            .into_iter()
            .map(|a| PenaltyBoundary::new(a, &disc.mesh))
            .collect::<Result<Vec<_>, _>>()?;
        let scalar_solver = SparseSolver::new(disc.scalar_pattern.clone(), config.linear_rtol)?;
        let vector_solver = SparseSolver::new(disc.vector_pattern.clone(), config.linear_rtol)?;
        let mut problem = Self {
            disc,
            card,
            config,
            shape,
            boundaries,
            unit_values,
            load_direction: load_direction.normalize(),
            thickness,
            scalar_solver,
            vector_solver,
        };
        problem.set_load(0.0);
        Ok(problem)
    }

    /// Scales every prescribed value to load level `d`.
    pub fn set_load(&mut self, d: f64) {
        for (b, (v, end)) in self.boundaries.iter_mut().zip(&self.unit_values) {
            b.arc.value = [v[0] * d, v[1] * d];
            b.arc.value_end = end.map(|e| [e[0] * d, e[1] * d]);
        }
    }

    fn is_loaded(&self, k: usize) -> bool {
        let (v, end) = self.unit_values[k];
        v != [0.0, 0.0] || end.is_some_and(|e| e != [0.0, 0.0])
    }

    /// Reaction force on the loaded boundaries, kN.
    pub fn reaction(&self, u: &[f64]) -> f64 {
        let loaded: Vec<PenaltyBoundary> = (0..self.boundaries.len())
            .filter(|&k| self.is_loaded(k))
            .map(|k| self.boundaries[k].clone())
            .collect();
        self.thickness * reaction_force(&self.disc, u, &loaded, self.load_direction)
    }
}

/// Which components the moving top arc constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopArcConstraint {
    /// `u_x = 0` and `u_y = -d`.
    #[default]
    Both,
    /// Only `u_y = -d`.
    Vertical,
}

/// Disk compressed between a fixed bottom arc and a top arc moving down.
pub fn dnbd_problem(
    geometry: &DnbdGeometry,
    mesh: &MeshSpec,
    card: MaterialCard,
    config: StaggeredConfig,
    thickness: f64,
    top: TopArcConstraint,
) -> Result<Problem, SolverError> {
    mesh.validate()?;
    let shape = geometry.build()?;
    let em = mesh.mesh_for(&shape)?;
    let disc = Discretization::new(em, &shape, mesh.depth, mesh.order(), config.alpha_fict)?;
    log::info!(
        "mesh {}x{} p={} with {} cut elements, {} quadrature points, {} scalar dofs",
        disc.mesh.nx,
        disc.mesh.ny,
        disc.mesh.degree,
        disc.cut_elements(),
        disc.n_points(),
        disc.dofs.n_scalar()
    );
    let arc = |mid: f64, constrain: [bool; 2], value: [f64; 2]| DirichletArc {
        path: BoundaryPath::Arc {
            center: [0.0, 0.0],
            radius: geometry.radius,
            mid_angle_deg: mid,
            length: geometry.loading_arc_length,
        },
        constrain,
        value,
        value_end: None,
        penalty: config.penalty,
    };
    let top_constrain = match top {
        TopArcConstraint::Both => [true, true],
        TopArcConstraint::Vertical => [false, true],
    };
    let arcs = vec![
        arc(90.0, top_constrain, [0.0, -1.0]),
        arc(270.0, [true, true], [0.0, 0.0]),
    ];
    Problem::new(
        disc,
        shape,
        card,
        config,
        arcs,
        Vector2::new(0.0, -1.0),
        thickness,
    )
}

/// Fully physical rectangle with every side held by a penalty curve whose
/// value per unit load is `gradient * x`, i.e. a homogeneous deformation.
pub fn homogeneous_patch(
    size: Point,
    mesh: &MeshSpec,
    card: MaterialCard,
    config: StaggeredConfig,
    gradient: nalgebra::Matrix2<f64>,
    load_direction: Vector2<f64>,
) -> Result<Problem, SolverError> {
    mesh.validate()?;
    let shape = ImplicitShape::rectangle(Point::zeros(), size);
    let (nx, ny) = mesh.counts();
    let em = EmbeddingMesh::new(Point::zeros(), size, nx, ny, mesh.p)?;
    let disc = Discretization::new(em, &shape, 0, mesh.order(), config.alpha_fict)?;
    let corners = [
        Point::zeros(),
        Point::new(size.x, 0.0),
        size,
        Point::new(0.0, size.y),
    ];
    let arcs = (0..4)
        .map(|k| {
            let (a, b) = (corners[k], corners[(k + 1) % 4]);
            let (ga, gb) = (gradient * a, gradient * b);
            DirichletArc {
                path: BoundaryPath::Segment {
                    start: [a.x, a.y],
                    end: [b.x, b.y],
                },
                constrain: [true, true],
                value: [ga.x, ga.y],
                value_end: Some([gb.x, gb.y]),
                penalty: config.penalty,
            }
        })
        .collect();
    Problem::new(disc, shape, card, config, arcs, load_direction, 1.0)
}
