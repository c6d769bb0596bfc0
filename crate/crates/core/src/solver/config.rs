//! Staggered-iteration settings and the adaptive load stepper.

use serde::{Deserialize, Serialize};

use super::SolverError;
use crate::material::{HistoryGate, SplitKind};

/// What happens when a load step still fails after the halved retry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonConvergencePolicy {
    #[default]
    Abort,
    /// Keep the last iterate, log a warning and continue.
    Accept,
}

/// Which per-step error drives the step-size controller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepErrorSource {
    /// Residual of the last staggered iteration of the step.
    #[default]
    FinalResidual,
    /// Residual of the first staggered iteration, i.e. how far the load
    /// increment moved the previous equilibrium.
    FirstResidual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StaggeredConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Dirichlet penalty, kN/mm^3.
    pub penalty: f64,
    pub alpha_fict: f64,
    pub linear_rtol: f64,
    pub on_nonconvergence: NonConvergencePolicy,
    pub history_gate: HistoryGate,
    pub split: SplitKind,
}

impl Default for StaggeredConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-5,
            max_iterations: 500,
            penalty: 1e6,
            alpha_fict: 1e-8,
            linear_rtol: 1e-10,
            on_nonconvergence: NonConvergencePolicy::Abort,
            history_gate: HistoryGate::Normalized,
            split: SplitKind::Zhang,
        }
    }
}

impl StaggeredConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: String| Err(SolverError::InvalidConfig(m));
        if !(self.tolerance > 0.0) {
            return bad(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            ));
        }
        if self.max_iterations < 1 {
            return bad("max_iterations must be at least 1".into());
        }
        if !(self.penalty > 0.0) {
            return bad(format!("penalty must be positive, got {}", self.penalty));
        }
        if !(self.alpha_fict > 0.0 && self.alpha_fict <= 1.0) {
            return bad(format!(
                "alpha_fict must lie in (0, 1], got {}",
                self.alpha_fict
            ));
        }
        if !(self.linear_rtol > 0.0) {
            return bad(format!(
                "linear_rtol must be positive, got {}",
                self.linear_rtol
            ));
        }
        Ok(())
    }
}

/// `max(du (tol / err)^kappa, u_min)`.
pub fn next_step_size(du: f64, tolerance: f64, achieved: f64, kappa: f64, u_min: f64) -> f64 {
    (du * (tolerance / achieved).powf(kappa)).max(u_min)
}

/// Displacement-control schedule, mm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LoadSchedule {
    pub u_init: f64,
    pub u_min: f64,
    pub kappa: f64,
    pub target_displacement: f64,
    /// Stop once the force falls below this fraction of the peak after the
    /// peak.
    pub failure_fraction: f64,
    pub step_error_source: StepErrorSource,
    pub max_steps: usize,
}

impl Default for LoadSchedule {
    fn default() -> Self {
        Self {
            u_init: 5e-3,
            u_min: 5e-4,
            kappa: 1.1,
            target_displacement: 0.2,
            failure_fraction: 0.01,
            step_error_source: StepErrorSource::FinalResidual,
            max_steps: 10_000,
        }
    }
}

impl LoadSchedule {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: String| Err(SolverError::InvalidConfig(m));
        if !(self.u_min > 0.0 && self.u_min <= self.u_init) {
            return bad(format!(
                "need 0 < u_min <= u_init, got {} and {}",
                self.u_min, self.u_init
            ));
        }
        if !(self.kappa > 0.0) {
            return bad(format!("kappa must be positive, got {}", self.kappa));
        }
        if !(self.target_displacement >= 0.0) {
            return bad(format!(
                "target_displacement must be >= 0, got {}",
                self.target_displacement
            ));
        }
        if !(0.0..1.0).contains(&self.failure_fraction) {
            return bad(format!(
                "failure_fraction must lie in [0, 1), got {}",
                self.failure_fraction
            ));
        }
        Ok(())
    }
}

/// Current increment and accumulated displacement; the increment always
/// stays within `[u_min, u_init]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadStepper {
    pub u_init: f64,
    pub u_min: f64,
    pub kappa: f64,
    pub current: f64,
    pub accumulated: f64,
}

impl LoadStepper {
    pub fn new(schedule: &LoadSchedule) -> Self {
        Self {
            u_init: schedule.u_init,
            u_min: schedule.u_min,
            kappa: schedule.kappa,
            current: schedule.u_init,
            accumulated: 0.0,
        }
    }

    /// Adapts the increment after a completed step of size `taken`.
    pub fn adapt(&mut self, taken: f64, tolerance: f64, achieved: f64) {
        let achieved = achieved.max(f64::MIN_POSITIVE);
        self.current =
            next_step_size(taken, tolerance, achieved, self.kappa, self.u_min).min(self.u_init);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_size_examples() {
        assert_eq!(next_step_size(5e-3, 1e-5, 1e-5, 1.1, 5e-4), 5e-3);
        let halved = next_step_size(5e-3, 1e-5, 2e-5, 1.1, 5e-4);
        assert!((halved - 5e-3 * 0.5f64.powf(1.1)).abs() < 1e-18);
        assert!((halved - 2.333e-3).abs() < 1e-6);
        assert_eq!(next_step_size(5e-3, 1e-5, 1e-2, 1.1, 5e-4), 5e-4);
    }

    #[test]
    fn stepper_stays_in_range() {
        let mut s = LoadStepper::new(&LoadSchedule::default());
        s.adapt(5e-3, 1e-5, 1e-9);
        assert_eq!(s.current, 5e-3);
        s.adapt(5e-3, 1e-5, 1.0);
        assert_eq!(s.current, 5e-4);
        s.adapt(5e-4, 1e-5, 0.0);
        assert_eq!(s.current, 5e-3);
    }

    #[test]
    fn defaults_validate() {
        StaggeredConfig::default().validate().unwrap();
        LoadSchedule::default().validate().unwrap();
        let c = StaggeredConfig {
            max_iterations: 0,
            ..StaggeredConfig::default()
        };
        assert!(c.validate().is_err());
        let l = LoadSchedule {
            u_min: 1.0,
            ..LoadSchedule::default()
        };
        assert!(l.validate().is_err());
    }
}
