//! Per-point history of the crack driving forces and the degradation law.

use serde::{Deserialize, Serialize};

use super::tensor::SymTensor2;

/// What the "dominating mode" comparison of the history update looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HistoryGate {
    /// Compare the candidate values divided by the fracture energy of
    /// their mode, `max(H, psi) / G_c`.
    #[default]
    Normalized,
    /// Compare the candidate values `max(H, psi)` of both modes.
    Candidate,
    /// Compare the stored values before the update. From a virgin state
    /// `H_I = H_II = 0` only mode I can ever grow under this rule.
    Previous,
}

/// A gate rule with the per-mode scale factors of its comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub rule: HistoryGate,
    pub scale: [f64; 2],
}

impl Gate {
    pub fn new(rule: HistoryGate, gc_tensile: f64, gc_shear: f64) -> Self {
        let scale = match rule {
            HistoryGate::Normalized => [1.0 / gc_tensile, 1.0 / gc_shear],
            _ => [1.0, 1.0],
        };
        Self { rule, scale }
    }

    /// The rule with unit scales; `Normalized` then acts as `Candidate`.
    pub fn unscaled(rule: HistoryGate) -> Self {
        Self {
            rule,
            scale: [1.0, 1.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPointState {
    pub h_i: f64,
    pub h_ii: f64,
    /// Indicator value of the point, cached from the partition.
    pub alpha: f64,
}

impl QuadPointState {
    pub fn new(alpha: f64) -> Self {
        Self {
            h_i: 0.0,
            h_ii: 0.0,
            alpha,
        }
    }

    /// Mode-gated history update comparing unscaled candidate values.
    pub fn update_history(&self, psi_i: f64, psi_ii: f64, s_i: f64, s_ii: f64) -> Self {
        self.update_history_with(
            Gate::unscaled(HistoryGate::Candidate),
            psi_i,
            psi_ii,
            s_i,
            s_ii,
        )
    }

    /// Mode I grows if it dominates or its crack is already open (`s_I < 0.5`),
    /// mode II likewise. Both guards are evaluated before either value
    /// changes, so both may fire in the same call.
    pub fn update_history_with(
        &self,
        gate: Gate,
        psi_i: f64,
        psi_ii: f64,
        s_i: f64,
        s_ii: f64,
    ) -> Self {
        let (cand_i, cand_ii) = (self.h_i.max(psi_i), self.h_ii.max(psi_ii));
        let (a, b) = match gate.rule {
            HistoryGate::Normalized | HistoryGate::Candidate => (cand_i, cand_ii),
            HistoryGate::Previous => (self.h_i, self.h_ii),
        };
        let (a, b) = (a * gate.scale[0], b * gate.scale[1]);
        let mut next = *self;
        if a >= b || s_i < 0.5 {
            next.h_i = cand_i;
        }
        if a < b || s_ii < 0.5 {
            next.h_ii = cand_ii;
        }
        next
    }
}

/// `(1 - eta) min(s_I, s_II)^2 + eta` with both inputs clamped to [0, 1].
pub fn degradation(s_i: f64, s_ii: f64, eta: f64) -> f64 {
    let s = s_i.clamp(0.0, 1.0).min(s_ii.clamp(0.0, 1.0));
    (1.0 - eta) * s * s + eta
}

/// `g (lambda tr(eps) I + 2 mu eps)`; the full tensor is degraded.
pub fn stress(eps: &SymTensor2, g: f64, lambda: f64, mu: f64) -> SymTensor2 {
    SymTensor2::identity()
        .scale(lambda * eps.trace())
        .add(&eps.scale(2.0 * mu))
        .scale(g)
}

/// Undegraded elastic energy density `lambda/2 tr^2 + mu eps:eps`.
pub fn strain_energy_density(eps: &SymTensor2, lambda: f64, mu: f64) -> f64 {
    0.5 * lambda * eps.trace().powi(2) + mu * eps.dot(eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn state(h_i: f64, h_ii: f64) -> QuadPointState {
        QuadPointState {
            h_i,
            h_ii,
            alpha: 1.0,
        }
    }

    #[test]
    fn gating_examples() {
        let s = state(5.0, 3.0).update_history(6.0, 4.0, 0.9, 0.9);
        assert_eq!((s.h_i, s.h_ii), (6.0, 3.0));
        let s = state(5.0, 3.0).update_history(6.0, 4.0, 0.9, 0.3);
        assert_eq!((s.h_i, s.h_ii), (6.0, 4.0));
        let s = state(5.0, 3.0).update_history(0.0, 0.0, 0.1, 0.1);
        assert_eq!((s.h_i, s.h_ii), (5.0, 3.0));
    }

    #[test]
    fn shear_activates_mode_two_from_virgin_state() {
        let s = QuadPointState::new(1.0).update_history(0.0, 0.01, 1.0, 1.0);
        assert_eq!((s.h_i, s.h_ii), (0.0, 0.01));
        let stuck = QuadPointState::new(1.0).update_history_with(
            Gate::unscaled(HistoryGate::Previous),
            0.0,
            0.01,
            1.0,
            1.0,
        );
        assert_eq!((stuck.h_i, stuck.h_ii), (0.0, 0.0));
    }

    #[test]
    fn both_gates_agree_on_reference_cases() {
        for rule in [
            HistoryGate::Normalized,
            HistoryGate::Candidate,
            HistoryGate::Previous,
        ] {
            let s =
                state(5.0, 3.0).update_history_with(Gate::new(rule, 1.0, 1.0), 6.0, 4.0, 0.9, 0.9);
            assert_eq!((s.h_i, s.h_ii), (6.0, 3.0));
        }
    }

    #[test]
    fn normalized_gate_favours_the_weaker_mode() {
        // uniaxial tension at a free surface: psi_II about four times psi_I
        let (psi_i, psi_ii) = (1.0, 4.0);
        let plain = QuadPointState::new(1.0).update_history(psi_i, psi_ii, 1.0, 1.0);
        assert_eq!((plain.h_i, plain.h_ii), (0.0, 4.0));
        let gate = Gate::new(HistoryGate::Normalized, 2e-5, 5e-4);
        let n = QuadPointState::new(1.0).update_history_with(gate, psi_i, psi_ii, 1.0, 1.0);
        assert_eq!((n.h_i, n.h_ii), (1.0, 0.0));
        // no tensile energy: mode II regardless of the scales
        let s = QuadPointState::new(1.0).update_history_with(gate, 0.0, 4.0, 1.0, 1.0);
        assert_eq!((s.h_i, s.h_ii), (0.0, 4.0));
    }

    #[test]
    fn degradation_examples() {
        assert_eq!(degradation(1.0, 1.0, 1e-6), 1.0);
        assert_eq!(degradation(0.0, 1.0, 1e-6), 1e-6);
        assert_eq!(degradation(0.5, 0.8, 0.0), 0.25);
        assert_eq!(degradation(1.2, -0.1, 0.0), 0.0);
    }

    #[test]
    fn stress_examples() {
        let (lambda, mu) = (30.0, 17.0);
        let e = SymTensor2::diag(1e-3, 0.0);
        let s = stress(&e, 1.0, lambda, mu);
        assert!((s.xx - (lambda + 2.0 * mu) * 1e-3).abs() < 1e-15);
        assert!((s.yy - lambda * 1e-3).abs() < 1e-15);
        let c = SymTensor2::diag(-1e-3, -1e-3);
        let d = stress(&c, 1e-6, lambda, mu);
        assert!((d.xx - 1e-6 * stress(&c, 1.0, lambda, mu).xx).abs() < 1e-20);
        assert!(d.xx < 0.0);
    }

    proptest! {
        #[test]
        fn history_never_decreases(h_i in 0.0f64..10.0, h_ii in 0.0f64..10.0,
                                   p_i in 0.0f64..10.0, p_ii in 0.0f64..10.0,
                                   s_i in 0.0f64..1.0, s_ii in 0.0f64..1.0) {
            for rule in [HistoryGate::Normalized, HistoryGate::Candidate, HistoryGate::Previous] {
                let next = state(h_i, h_ii).update_history_with(Gate::new(rule, 2e-5, 5e-4), p_i, p_ii, s_i, s_ii);
                prop_assert!(next.h_i >= h_i && next.h_ii >= h_ii);
            }
        }

        #[test]
        fn degradation_is_monotone(a in 0.0f64..1.0, b in 0.0f64..1.0, d in 0.0f64..0.5, eta in 0.0f64..0.01) {
            let g = degradation(a, b, eta);
            prop_assert!(degradation(a + d, b, eta) >= g);
            prop_assert!(degradation(a, b + d, eta) >= g);
            prop_assert!(g >= eta && g <= 1.0);
        }
    }
}
