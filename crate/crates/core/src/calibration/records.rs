//! Experiment records and the batch calibration of a material card.

use serde::{Deserialize, Serialize};

use super::toughness::{
    fracture_energy, length_scale, mode2_toughness, shear_strength, KStarTable,
};
use super::CalibrationError;
use crate::material::{MaterialCard, RockPreset};

/// One disk test. Lengths in mm, force in kN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub rock: String,
    #[serde(rename = "F_kN")]
    pub force: f64,
    #[serde(rename = "a_mm")]
    pub notch_length: f64,
    #[serde(rename = "R_mm")]
    pub radius: f64,
    #[serde(rename = "t_mm")]
    pub thickness: f64,
    #[serde(rename = "l_mm")]
    pub ligament: f64,
    pub angle_deg: f64,
}

impl ExperimentRecord {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("F_kN", self.force),
            ("a_mm", self.notch_length),
            ("R_mm", self.radius),
            ("t_mm", self.thickness),
            ("l_mm", self.ligament),
            ("angle_deg", self.angle_deg),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        // the opposite notch implied by the ligament must have positive length
        if self.notch_length + self.ligament >= 2.0 * self.radius {
            return Err(format!(
                "a + l = {} leaves no room for the second notch on a disk of radius {}",
                self.notch_length + self.ligament,
                self.radius
            ));
        }
        Ok(())
    }
}

const HEADER: [&str; 7] = ["rock", "F_kN", "a_mm", "R_mm", "t_mm", "l_mm", "angle_deg"];

/// Parses the experiment CSV; the header must match exactly.
pub fn parse_records(text: &str) -> Result<Vec<ExperimentRecord>, CalibrationError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| CalibrationError::Csv {
        line: 1,
        reason: e.to_string(),
    })?;
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(CalibrationError::Csv {
            line: 1,
            reason: format!("expected header '{}'", HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for (k, row) in reader.deserialize::<ExperimentRecord>().enumerate() {
        let line = k + 2;
        let rec = row.map_err(|e| CalibrationError::Csv {
            line,
            reason: e.to_string(),
        })?;
        rec.validate()
            .map_err(|reason| CalibrationError::Csv { line, reason })?;
        out.push(rec);
    }
    Ok(out)
}

/// TOML form of a card: a single `[material]` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialCardFile {
    pub material: MaterialCard,
}

pub enum CalibrationSource<'a> {
    Preset(RockPreset),
    /// Records plus the card providing E, nu, tensile strength and the
    /// tensile fracture energy.
    Records {
        base: MaterialCard,
        records: &'a [ExperimentRecord],
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub card: MaterialCard,
    /// Mean shear toughness, kN mm^(-3/2); `None` for presets.
    pub k_ii: Option<f64>,
    pub per_record_k_ii: Vec<f64>,
    pub records: usize,
}

/// Builds a card from a preset or from a batch of records of one rock and
/// one specimen family.
pub fn build_material_card(
    source: CalibrationSource<'_>,
    table: &KStarTable,
) -> Result<Calibration, CalibrationError> {
    let (base, records) = match source {
        CalibrationSource::Preset(p) => {
            return Ok(Calibration {
                card: p.card(),
                k_ii: None,
                per_record_k_ii: Vec::new(),
                records: 0,
            })
        }
        CalibrationSource::Records { base, records } => (base, records),
    };
    let first = records.first().ok_or(CalibrationError::EmptyBatch)?;
    for r in records {
        r.validate()
            .map_err(CalibrationError::InconsistentGeometry)?;
        let same = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs());
        if r.rock != first.rock {
            return Err(CalibrationError::InconsistentGeometry(format!(
                "batch mixes rocks '{}' and '{}'",
                first.rock, r.rock
            )));
        }
        if !same(r.radius, first.radius)
            || !same(r.thickness, first.thickness)
            || !same(r.angle_deg, first.angle_deg)
        {
            return Err(CalibrationError::InconsistentGeometry(format!(
                "records differ in radius, thickness or loading angle (R {} vs {}, t {} vs {}, angle {} vs {})",
                r.radius, first.radius, r.thickness, first.thickness, r.angle_deg, first.angle_deg
            )));
        }
    }
    let mut per_record = Vec::with_capacity(records.len());
    for r in records {
        let (_, k_star) = table.lookup(r.notch_length / r.radius, r.angle_deg)?;
        per_record.push(mode2_toughness(
            r.force,
            r.notch_length,
            r.radius,
            r.thickness,
            k_star,
        ));
    }
    let n = records.len() as f64;
    let k_ii = per_record.iter().sum::<f64>() / n;
    let tau = records
        .iter()
        .map(|r| shear_strength(r.force, r.ligament, r.thickness))
        .sum::<f64>()
        / n;
    let e = base.youngs_modulus;
    let gc_shear = fracture_energy(k_ii, e);
    let card = MaterialCard {
        gc_shear,
        shear_strength: tau,
        l0_tensile: length_scale(base.gc_tensile, e, base.tensile_strength),
        l0_shear: length_scale(gc_shear, e, tau),
        ..base
    };
    Ok(Calibration {
        card,
        k_ii: Some(k_ii),
        per_record_k_ii: per_record,
        records: records.len(),
    })
}
