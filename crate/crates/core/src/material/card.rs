//! Material parameter sets and the two shipped rock presets.

use serde::{Deserialize, Serialize};

use super::MaterialError;

/// Full parameter set in the kN-mm system (moduli and strengths in kN/mm^2,
/// fracture energies in kN/mm, length scales in mm).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialCard {
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub gc_tensile: f64,
    pub gc_shear: f64,
    pub l0_tensile: f64,
    pub l0_shear: f64,
    #[serde(default = "default_eta")]
    pub eta: f64,
    pub tensile_strength: f64,
    pub shear_strength: f64,
}

pub fn default_eta() -> f64 {
    1e-6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RockPreset {
    /// Solnhofen limestone.
    Spk,
    /// Pfraundorfer dolostone.
    Pfd,
}

impl std::str::FromStr for RockPreset {
    type Err = MaterialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "spk" => Ok(RockPreset::Spk),
            "pfd" => Ok(RockPreset::Pfd),
            _ => Err(MaterialError::UnknownPreset(s.to_string())),
        }
    }
}

impl RockPreset {
    pub fn name(self) -> &'static str {
        match self {
            RockPreset::Spk => "spk",
            RockPreset::Pfd => "pfd",
        }
    }

    pub fn card(self) -> MaterialCard {
        match self {
            RockPreset::Spk => MaterialCard::spk(),
            RockPreset::Pfd => MaterialCard::pfd(),
        }
    }
}

impl MaterialCard {
    /// Solnhofen limestone. The tensile length scale is the reference value;
    /// the strength formula gives 0.229 mm with these inputs.
    pub fn spk() -> Self {
        Self {
            youngs_modulus: 45.8,
            poisson_ratio: 0.31,
            gc_tensile: 1.97e-5,
            gc_shear: 4.98e-4,
            l0_tensile: 0.259,
            l0_shear: 0.682,
            eta: default_eta(),
            tensile_strength: 0.0144,
            shear_strength: 16.74 / 400.0,
        }
    }

    /// Pfraundorfer dolostone.
    pub fn pfd() -> Self {
        Self {
            youngs_modulus: 52.5,
            poisson_ratio: 0.27,
            gc_tensile: 3.928e-5,
            gc_shear: 3.0366e-4,
            l0_tensile: 0.916,
            l0_shear: 0.656,
            eta: default_eta(),
            tensile_strength: 0.0109,
            shear_strength: 14.30 / 400.0,
        }
    }

    pub fn lambda(&self) -> f64 {
        let (e, nu) = (self.youngs_modulus, self.poisson_ratio);
        e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu))
    }

    pub fn mu(&self) -> f64 {
        self.youngs_modulus / (2.0 * (1.0 + self.poisson_ratio))
    }

    pub fn validate(&self) -> Result<(), MaterialError> {
        let bad = |m: String| Err(MaterialError::InvalidCard(m));
        if !(self.youngs_modulus > 0.0) {
            return bad(format!(
                "youngs_modulus must be positive, got {}",
                self.youngs_modulus
            ));
        }
        if !(self.poisson_ratio > -1.0 && self.poisson_ratio < 0.5) {
            return bad(format!(
                "poisson_ratio must lie in (-1, 0.5), got {}",
                self.poisson_ratio
            ));
        }
        for (name, v) in [
            ("gc_tensile", self.gc_tensile),
            ("gc_shear", self.gc_shear),
            ("l0_tensile", self.l0_tensile),
            ("l0_shear", self.l0_shear),
            ("tensile_strength", self.tensile_strength),
            ("shear_strength", self.shear_strength),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if !(self.eta > 0.0 && self.eta < 0.1) {
            return bad(format!("eta must lie in (0, 0.1), got {}", self.eta));
        }
        Ok(())
    }
}
