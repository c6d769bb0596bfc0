//! Load-displacement CSV.

use std::path::Path;

use super::{write_atomic, OutputError};
use crate::solver::StepRecord;

pub const HEADER: &str = "step,displacement_mm,force_kN,staggered_iters,residual";

/// One row per step; rows must be strictly ordered by applied displacement
/// (a repeated zero step is not allowed either).
pub fn format_load_curve(series: &[StepRecord]) -> Result<String, OutputError> {
    if series.is_empty() {
        return Err(OutputError::Empty);
    }
    let mut out = String::from(HEADER);
    out.push('\n');
    for (k, r) in series.iter().enumerate() {
        if k > 0 && !(r.displacement > series[k - 1].displacement) {
            return Err(OutputError::Unordered(k));
        }
        out.push_str(&format!(
            "{},{:?},{:?},{},{:e}\n",
            r.step, r.displacement, r.force, r.iterations, r.residual
        ));
    }
    Ok(out)
}

pub fn write_load_curve(series: &[StepRecord], path: &Path) -> Result<(), OutputError> {
    write_atomic(path, format_load_curve(series)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(step: usize, d: f64, f: f64) -> StepRecord {
        StepRecord {
            step,
            displacement: d,
            force: f,
            iterations: 1,
            residual: 2.5e-7,
            overshoot: 0.0,
            elastic_energy: 0.0,
            external_work: 0.0,
        }
    }

    #[test]
    fn zero_step_row() {
        let text = format_load_curve(&[rec(0, 0.0, 0.0)]).unwrap();
        assert_eq!(text, format!("{HEADER}\n0,0.0,0.0,1,2.5e-7\n"));
    }

    #[test]
    fn ordering_guard() {
        let e = format_load_curve(&[rec(0, 0.0, 0.0), rec(1, 0.01, 1.0), rec(2, 0.005, 2.0)])
            .unwrap_err();
        assert!(matches!(e, OutputError::Unordered(2)));
        assert!(matches!(format_load_curve(&[]), Err(OutputError::Empty)));
    }

    #[test]
    fn written_atomically() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("curve.csv");
        write_load_curve(&[rec(0, 0.0, 0.0), rec(1, 5e-3, 1.5)], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.ends_with("1,0.005,1.5,1,2.5e-7\n"));
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
