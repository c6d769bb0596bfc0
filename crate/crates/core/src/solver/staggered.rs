//! Fixed-point iteration over the two phase fields and the displacement.

use nalgebra::Vector2;

use super::problem::Problem;
use super::SolverError;
use crate::fem::{assemble_elastic, assemble_phase, norm, LinearSystem, PhaseMode};
use crate::material::{degradation, small_strain, Gate, QuadPointState};

/// Converged load-step data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    /// Applied displacement of the moving boundary, mm.
    pub displacement: f64,
    /// Reaction force, kN.
    pub force: f64,
    pub iterations: usize,
    /// Final staggered residual `max(R_u, R_sI, R_sII)`.
    pub residual: f64,
    /// Largest pre-clamp excursion of a phase field outside [0, 1] at a
    /// physical point.
    pub overshoot: f64,
    /// Degraded elastic energy times thickness, kN mm.
    pub elastic_energy: f64,
    /// Trapezoidal integral of force over displacement, kN mm.
    pub external_work: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    pub u: Vec<f64>,
    pub s_i: Vec<f64>,
    pub s_ii: Vec<f64>,
    pub history: Vec<QuadPointState>,
    /// Applied displacement of the last converged step, mm.
    pub displacement: f64,
    pub steps: Vec<StepRecord>,
}

impl SimulationState {
    /// Intact, unloaded state: `u = 0`, both phase fields 1.
    pub fn new(problem: &Problem) -> Self {
        let disc = &problem.disc;
        Self {
            u: vec![0.0; disc.dofs.n_vector()],
            s_i: disc.constant_scalar(1.0),
            s_ii: disc.constant_scalar(1.0),
            history: disc
                .points
                .iter()
                .map(|p| QuadPointState::new(p.alpha))
                .collect(),
            displacement: 0.0,
            steps: Vec::new(),
        }
    }

    pub fn history_fields(&self) -> (Vec<f64>, Vec<f64>) {
        self.history.iter().map(|h| (h.h_i, h.h_ii)).unzip()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaggeredOutcome {
    pub iterations: usize,
    /// `max` of the three field residuals in the last iteration.
    pub residual: f64,
    /// `[R_u, R_sI, R_sII]` of the last iteration.
    pub residuals: [f64; 3],
    pub first_residual: f64,
    pub overshoot: f64,
}

fn relative_change(new: &[f64], old: &[f64]) -> f64 {
    let diff: f64 = new
        .iter()
        .zip(old)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    diff / norm(new).max(1e-12)
}

/// Runs staggered iterations until every field's relative change drops
/// below the tolerance. On the iteration cap the state holds the last
/// iterate and `NonConvergence` is returned.
pub fn staggered_solve(
    state: &mut SimulationState,
    problem: &mut Problem,
) -> Result<StaggeredOutcome, SolverError> {
    let cfg = problem.config.clone();
    let card = problem.card.clone();
    let (lambda, mu) = (card.lambda(), card.mu());
    let gate = Gate::new(cfg.history_gate, card.gc_tensile, card.gc_shear);
    let n_points = problem.disc.n_points();
    let mut g = vec![0.0; n_points];
    let mut first_residual = f64::NAN;
    let mut last = [f64::NAN; 3];
    for iteration in 1..=cfg.max_iterations {
        let (h_i, h_ii) = state.history_fields();
        let sys = assemble_phase(
            PhaseMode::I,
            &problem.disc,
            &h_i,
            card.l0_tensile,
            card.gc_tensile,
            card.eta,
        )?;
        let s_i = solve(problem, &sys, false)?;
        let sys = assemble_phase(
            PhaseMode::II,
            &problem.disc,
            &h_ii,
            card.l0_shear,
            card.gc_shear,
            card.eta,
        )?;
        let s_ii = solve(problem, &sys, false)?;

        for (q, gq) in g.iter_mut().enumerate() {
            *gq = degradation(
                problem.disc.scalar_at(&s_i, q),
                problem.disc.scalar_at(&s_ii, q),
                card.eta,
            );
        }
        let sys = assemble_elastic(
            &problem.disc,
            &g,
            lambda,
            mu,
            Vector2::zeros(),
            &problem.boundaries,
        )?;
        let u = solve(problem, &sys, true)?;

        let residuals = [
            relative_change(&u, &state.u),
            relative_change(&s_i, &state.s_i),
            relative_change(&s_ii, &state.s_ii),
        ];
        state.u = u;
        state.s_i = s_i;
        state.s_ii = s_ii;

        let mut overshoot: f64 = 0.0;
        for (q, qp) in problem.disc.points.iter().enumerate() {
            if !qp.is_physical() {
                continue;
            }
            let a = problem.disc.scalar_at(&state.s_i, q);
            let b = problem.disc.scalar_at(&state.s_ii, q);
            overshoot = overshoot.max(a - 1.0).max(b - 1.0).max(-a).max(-b);
            let eps = small_strain(&problem.disc.vector_gradient_at(&state.u, q));
            let (psi_i, psi_ii) = cfg.split.driving_forces(&eps, lambda, mu);
            state.history[q] = state.history[q].update_history_with(gate, psi_i, psi_ii, a, b);
        }

        let residual = residuals.iter().fold(0.0f64, |m, r| m.max(*r));
        if iteration == 1 {
            first_residual = residual;
        }
        last = residuals;
        log::debug!("staggered iteration {iteration}: residuals {residuals:?}");
        if residual < cfg.tolerance {
            return Ok(StaggeredOutcome {
                iterations: iteration,
                residual,
                residuals,
                first_residual,
                overshoot,
            });
        }
    }
    Err(SolverError::NonConvergence {
        iterations: cfg.max_iterations,
        residuals: last,
    })
}

fn solve(
    problem: &mut Problem,
    system: &LinearSystem,
    vector: bool,
) -> Result<Vec<f64>, SolverError> {
    let solver = if vector {
        &mut problem.vector_solver
    } else {
        &mut problem.scalar_solver
    };
    let (x, report) = solver.solve(system)?;
    if report.residual > solver.rtol {
        log::warn!(
            "{:?} solve reached relative residual {:.3e} (target {:.1e})",
            system.field,
            report.residual,
            solver.rtol
        );
    }
    Ok(x)
}
