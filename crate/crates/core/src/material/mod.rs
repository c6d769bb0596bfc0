//! Kinematics, the strain split, degradation, history updates and material
//! parameter sets.

mod card;
mod energy;
mod history;
mod split;
mod tensor;

pub use card::{default_eta, MaterialCard, RockPreset};
pub use energy::{surface_density, total_energy, EnergyBreakdown};
pub use history::{degradation, strain_energy_density, stress, Gate, HistoryGate, QuadPointState};
pub use split::{driving_forces, SplitKind, StrainSplit, ZhangSplit};
pub use tensor::{small_strain, spectral_positive, SymTensor2};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MaterialError {
    #[error("invalid material card: {0}")]
    InvalidCard(String),
    #[error("unknown material preset '{0}' (known: spk, pfd)")]
    UnknownPreset(String),
}
