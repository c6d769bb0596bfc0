//! Energy diagnostic of a discrete state.

use super::card::MaterialCard;
use super::history::{degradation, strain_energy_density};
use super::tensor::small_strain;
use crate::fem::Discretization;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyBreakdown {
    /// Degraded elastic energy, kN mm per mm thickness.
    pub elastic: f64,
    pub surface_tensile: f64,
    pub surface_shear: f64,
}

impl EnergyBreakdown {
    pub fn total(&self) -> f64 {
        self.elastic + self.surface_tensile + self.surface_shear
    }
}

/// Crack surface density `Gc [(1 - s)^2 / (4 l0) + l0 |grad s|^2]`, whose
/// minimiser is the phase equation that is assembled.
pub fn surface_density(s: f64, grad_sq: f64, gc: f64, l0: f64) -> f64 {
    let d = 1.0 - s.clamp(0.0, 1.0);
    gc * (d * d / (4.0 * l0) + l0 * grad_sq)
}

pub fn total_energy(
    disc: &Discretization,
    u: &[f64],
    s_i: &[f64],
    s_ii: &[f64],
    card: &MaterialCard,
) -> EnergyBreakdown {
    let (lambda, mu) = (card.lambda(), card.mu());
    let mut out = EnergyBreakdown::default();
    for (q, qp) in disc.points.iter().enumerate() {
        let w = qp.weight * qp.alpha;
        let eps = small_strain(&disc.vector_gradient_at(u, q));
        let (a, ga) = disc.scalar_gradient_at(s_i, q);
        let (b, gb) = disc.scalar_gradient_at(s_ii, q);
        out.elastic += w * degradation(a, b, card.eta) * strain_energy_density(&eps, lambda, mu);
        out.surface_tensile +=
            w * surface_density(a, ga.norm_squared(), card.gc_tensile, card.l0_tensile);
        out.surface_shear +=
            w * surface_density(b, gb.norm_squared(), card.gc_shear, card.l0_shear);
    }
    out
}
