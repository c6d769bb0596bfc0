//! From disk-test failure loads to material cards.

mod records;
mod toughness;

pub use records::{
    build_material_card, parse_records, Calibration, CalibrationSource, ExperimentRecord,
    MaterialCardFile,
};
pub use toughness::{
    fracture_energy, from_mpa_sqrt_m, kstar_lookup, length_scale, mode2_toughness, shear_strength,
    strength_for_length_scale, to_mpa_sqrt_m, KStarRow, KStarTable, MPA, MPA_SQRT_M,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CalibrationError {
    #[error("a/R = {a_over_r} outside the tabulated range [{lo}, {hi}]")]
    OutOfRange { a_over_r: f64, lo: f64, hi: f64 },
    #[error("no table rows for loading angle {0} deg")]
    UnknownAngle(f64),
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("record batch is empty")]
    EmptyBatch,
    #[error("inconsistent geometry: {0}")]
    InconsistentGeometry(String),
    #[error("records line {line}: {reason}")]
    Csv { line: usize, reason: String },
}
