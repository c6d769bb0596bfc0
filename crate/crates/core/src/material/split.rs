//! Crack driving forces from the strain state.

use serde::{Deserialize, Serialize};

use super::tensor::{spectral_positive, SymTensor2};

/// Splits the tensile strain energy into mode I and mode II parts.
pub trait StrainSplit {
    /// Instantaneous `(psi_I, psi_II)`, kN/mm^2.
    fn driving_forces(&self, eps: &SymTensor2, lambda: f64, mu: f64) -> (f64, f64);
}

/// Volumetric tension drives mode I, the spectral positive deviator-like
/// part drives mode II: `psi_I = lambda/2 <tr eps>+^2`,
/// `psi_II = mu tr(eps+^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ZhangSplit;

impl StrainSplit for ZhangSplit {
    fn driving_forces(&self, eps: &SymTensor2, lambda: f64, mu: f64) -> (f64, f64) {
        let tr = eps.trace().max(0.0);
        let pos = spectral_positive(eps);
        (0.5 * lambda * tr * tr, mu * pos.dot(&pos))
    }
}

/// Config-level choice of split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitKind {
    #[default]
    Zhang,
}

impl SplitKind {
    pub fn driving_forces(self, eps: &SymTensor2, lambda: f64, mu: f64) -> (f64, f64) {
        match self {
            SplitKind::Zhang => ZhangSplit.driving_forces(eps, lambda, mu),
        }
    }
}

pub fn driving_forces(eps: &SymTensor2, lambda: f64, mu: f64) -> (f64, f64) {
    ZhangSplit.driving_forces(eps, lambda, mu)
}
