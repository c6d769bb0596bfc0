//! Displacement-controlled driver with adaptive increments.

use super::config::{LoadSchedule, LoadStepper, NonConvergencePolicy, StepErrorSource};
use super::problem::Problem;
use super::staggered::{staggered_solve, SimulationState, StaggeredOutcome, StepRecord};
use super::SolverError;
use crate::material::total_energy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    TargetReached,
    /// Force fell below the configured fraction of its peak.
    Failure,
    MaxSteps,
}

#[derive(Debug, Clone)]
pub struct SimulationOutcome {
    pub state: SimulationState,
    pub termination: Termination,
}

/// Called after every accepted step, including the initial zero step.
pub type StepObserver<'a> =
    dyn FnMut(&StepRecord, &SimulationState, &Problem) -> Result<(), SolverError> + 'a;

fn solve_at(
    state: &mut SimulationState,
    problem: &mut Problem,
    displacement: f64,
) -> Result<StaggeredOutcome, SolverError> {
    problem.set_load(displacement);
    staggered_solve(state, problem)
}

fn record(
    state: &mut SimulationState,
    problem: &Problem,
    displacement: f64,
    out: &StaggeredOutcome,
) -> StepRecord {
    let force = problem.reaction(&state.u);
    let work = match state.steps.last() {
        Some(prev) => {
            prev.external_work + 0.5 * (prev.force + force) * (displacement - prev.displacement)
        }
        None => 0.0,
    };
    let energy = total_energy(
        &problem.disc,
        &state.u,
        &state.s_i,
        &state.s_ii,
        &problem.card,
    );
    let rec = StepRecord {
        step: state.steps.len(),
        displacement,
        force,
        iterations: out.iterations,
        residual: out.residual,
        overshoot: out.overshoot,
        elastic_energy: energy.elastic * problem.thickness,
        external_work: work,
    };
    if out.overshoot > 0.05 {
        log::warn!(
            "step {}: phase field overshoot {:.3e} before clamping",
            rec.step,
            out.overshoot
        );
    }
    state.displacement = displacement;
    state.steps.push(rec);
    rec
}

/// Runs the load history from the intact state.
pub fn simulate(
    problem: &mut Problem,
    schedule: &LoadSchedule,
    observer: &mut StepObserver<'_>,
) -> Result<SimulationOutcome, SolverError> {
    schedule.validate()?;
    let tolerance = problem.config.tolerance;
    let mut state = SimulationState::new(problem);
    let zero = solve_at(&mut state, problem, 0.0)?;
    let rec = record(&mut state, problem, 0.0, &zero);
    observer(&rec, &state, problem)?;

    let mut stepper = LoadStepper::new(schedule);
    let mut peak: f64 = rec.force.max(0.0);
    let target = schedule.target_displacement;
    let termination = loop {
        if stepper.accumulated >= target - 1e-12 {
            break Termination::TargetReached;
        }
        if state.steps.len() > schedule.max_steps {
            break Termination::MaxSteps;
        }
        let mut du = stepper.current.min(target - stepper.accumulated);
        let backup = state.clone();
        let mut attempt = solve_at(&mut state, problem, stepper.accumulated + du);
        if let Err(SolverError::NonConvergence { residuals, .. }) = &attempt {
            log::warn!(
                "step at {:.4e} mm did not converge (residuals {residuals:?}), retrying with half the increment",
                stepper.accumulated + du
            );
            state = backup.clone();
            du *= 0.5;
            attempt = solve_at(&mut state, problem, stepper.accumulated + du);
        }
        let out = match attempt {
            Ok(out) => out,
            Err(SolverError::NonConvergence {
                iterations,
                residuals,
            }) if problem.config.on_nonconvergence == NonConvergencePolicy::Accept => {
                log::warn!("accepting non-converged step after {iterations} iterations, residuals {residuals:?}");
                let residual = residuals.iter().fold(0.0f64, |m, r| m.max(*r));
                StaggeredOutcome {
                    iterations,
                    residual,
                    residuals,
                    first_residual: residual,
                    overshoot: 0.0,
                }
            }
            Err(e) => return Err(e),
        };
        stepper.accumulated += du;
        let rec = record(&mut state, problem, stepper.accumulated, &out);
        log::info!(
            "step {}: u = {:.4e} mm, F = {:.4} kN, {} iterations",
            rec.step,
            rec.displacement,
            rec.force,
            rec.iterations
        );
        observer(&rec, &state, problem)?;
        let achieved = match schedule.step_error_source {
            StepErrorSource::FinalResidual => out.residual,
            StepErrorSource::FirstResidual => out.first_residual,
        };
        stepper.adapt(du, tolerance, achieved);
        if rec.force > peak {
            peak = rec.force;
        } else if peak > 0.0 && rec.force < schedule.failure_fraction * peak {
            break Termination::Failure;
        }
    };
    Ok(SimulationOutcome { state, termination })
}
