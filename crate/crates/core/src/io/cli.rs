//! Command-line surface: `run`, `calibrate`, `geometry` and `version`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use super::config::{parse_config, SimulationConfig};
use super::run::run_simulation;
use super::SchemaError;
use crate::calibration::{
    build_material_card, parse_records, to_mpa_sqrt_m, CalibrationSource, KStarTable,
    MaterialCardFile,
};
use crate::geometry::measure_physical_area;
use crate::material::RockPreset;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

pub const SCHEMA_HELP: &str = "\
Config sections (TOML; full key reference in docs/config.md):
  [geometry]       thickness, top_arc = \"both\" | \"vertical\"
  [geometry.dnbd]  radius, notch_top, notch_bottom, notch_width, notch_offset,
                   load_angle_deg, loading_arc_length
  [geometry.csg]   shape (CSG tree), supports, load_direction
  [mesh]           nx, ny, p (1..4), refinement, depth, quad_order, margin
  [material]       preset = \"spk\" | \"pfd\" and/or the card keys
  [solver]         tolerance, max_iterations, penalty, alpha_fict, linear_rtol,
                   on_nonconvergence, history_gate, split
  [loading]        u_init, u_min, kappa, target_displacement, failure_fraction,
                   step_error_source, max_steps
  [output]         directory, snapshot_every, samples_per_element, formats";

#[derive(Debug, Parser)]
#[command(
    name = "rockfrac",
    about = "Phase-field fracture of notched rock disks",
    disable_version_flag = true
)]
struct Cli {
    /// More log output (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a simulation.
    Run {
        config: PathBuf,
        /// Overrides `output.directory`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Calibrate a material card from disk-test records.
    Calibrate {
        records: PathBuf,
        /// Use only records of this rock; its preset supplies the elastic
        /// and tensile parameters.
        #[arg(long)]
        rock: Option<String>,
    },
    /// Geometry and integration diagnostics.
    Geometry {
        config: PathBuf,
        /// Compare the integrated physical area with the analytic one; fails
        /// above 1% relative error.
        #[arg(long)]
        check: bool,
    },
    /// Print the version.
    Version,
}

enum Failure {
    Usage(String),
    Schema(SchemaError),
    Runtime(String),
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_config(path: &Path) -> Result<SimulationConfig, Failure> {
    parse_config(&read(path)?).map_err(Failure::Schema)
}

/// Parses `args` (including the program name) and runs the command.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).try_init();

    let result = match cli.command {
        Command::Run { config, output } => run(&config, output.as_deref(), out),
        Command::Calibrate { records, rock } => calibrate(&records, rock.as_deref(), out),
        Command::Geometry { config, check } => geometry(&config, check, out),
        Command::Version => writeln!(out, "rockfrac {}", env!("CARGO_PKG_VERSION"))
            .map_err(|e| Failure::Runtime(e.to_string())),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Schema(e)) => {
            let _ = writeln!(err, "config error: {e}\n\n{SCHEMA_HELP}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_FAILURE
        }
    }
}

fn io_fail(e: std::io::Error) -> Failure {
    Failure::Runtime(e.to_string())
}

fn run(path: &Path, output: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    let config = load_config(path)?;
    let dir = output
        .map(Path::to_path_buf)
        .unwrap_or_else(|| config.output.directory.clone());
    let artifact = run_simulation(&config, &dir).map_err(|e| Failure::Runtime(e.to_string()))?;
    let peak = artifact.peak().expect("the zero step is always recorded");
    writeln!(
        out,
        "{} steps, {:?}; peak force {:.4} kN at {:.4e} mm; output in {}",
        artifact.series.len(),
        artifact.termination,
        peak.force,
        peak.displacement,
        dir.display()
    )
    .map_err(io_fail)
}

fn calibrate(path: &Path, rock: Option<&str>, out: &mut dyn Write) -> Result<(), Failure> {
    let mut records = parse_records(&read(path)?).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(r) = rock {
        records.retain(|x| x.rock.eq_ignore_ascii_case(r));
        if records.is_empty() {
            return Err(Failure::Usage(format!("no records for rock '{r}'")));
        }
    }
    let name = rock
        .or(records.first().map(|r| r.rock.as_str()))
        .unwrap_or("")
        .to_string();
    if let Some(other) = records.iter().find(|r| !r.rock.eq_ignore_ascii_case(&name)) {
        return Err(Failure::Usage(format!(
            "records mix rocks '{name}' and '{}'; select one with --rock",
            other.rock
        )));
    }
    let preset: RockPreset = name.parse().map_err(|_| {
        Failure::Usage(format!(
            "no preset for rock '{name}' to supply E, nu and the tensile parameters"
        ))
    })?;
    let c = build_material_card(
        CalibrationSource::Records {
            base: preset.card(),
            records: &records,
        },
        &KStarTable::default(),
    )
    .map_err(|e| Failure::Usage(e.to_string()))?;
    let k = c.k_ii.unwrap_or(0.0);
    let mut text = format!(
        "# rock {}: {} records, mean K_IIc = {:.4} MPa m^0.5 ({:.6e} kN mm^-1.5)\n",
        preset.name(),
        c.records,
        to_mpa_sqrt_m(k),
        k
    );
    let shipped = preset.card().l0_tensile;
    if (c.card.l0_tensile / shipped - 1.0).abs() > 0.01 {
        text.push_str(&format!(
            "# l0_tensile from the strength relation is {:.4} mm; the {} preset ships {shipped} mm\n",
            c.card.l0_tensile,
            preset.name()
        ));
    }
    text.push_str(
        &toml::to_string(&MaterialCardFile { material: c.card })
            .map_err(|e| Failure::Runtime(e.to_string()))?,
    );
    write!(out, "{text}").map_err(io_fail)
}

fn geometry(path: &Path, check: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let config = load_config(path)?;
    let shape = match (&config.geometry.dnbd, &config.geometry.csg) {
        (Some(d), _) => d.build().map_err(|e| Failure::Usage(e.to_string()))?,
        (None, Some(c)) => c.shape.clone(),
        (None, None) => unreachable!("validated config has a geometry"),
    };
    let mesh = config
        .mesh
        .mesh_for(&shape)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let bbox = shape.bounding_box().expect("mesh_for checked boundedness");
    writeln!(
        out,
        "shape box [{:.3}, {:.3}] x [{:.3}, {:.3}] mm; mesh {} x {} elements, p = {}, depth {}",
        bbox.min.x,
        bbox.max.x,
        bbox.min.y,
        bbox.max.y,
        mesh.nx,
        mesh.ny,
        mesh.degree,
        config.mesh.depth
    )
    .map_err(io_fail)?;
    if !check {
        return Ok(());
    }
    let area = measure_physical_area(&shape, &mesh, config.mesh.depth, config.mesh.order());
    writeln!(out, "physical area  {area:.6} mm^2").map_err(io_fail)?;
    let Some(d) = &config.geometry.dnbd else {
        return writeln!(out, "no analytic area for raw CSG shapes").map_err(io_fail);
    };
    let exact = d.analytic_area();
    let rel = (area - exact).abs() / exact;
    writeln!(
        out,
        "analytic area  {exact:.6} mm^2\nrelative error {rel:.3e}"
    )
    .map_err(io_fail)?;
    if rel >= 0.01 {
        return Err(Failure::Runtime(format!("area error {rel:.3e} exceeds 1%")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = dispatch(
            std::iter::once("rockfrac").chain(args.iter().copied()),
            &mut o,
            &mut e,
        );
        (
            code,
            String::from_utf8(o).unwrap(),
            String::from_utf8(e).unwrap(),
        )
    }

    #[test]
    fn no_arguments_is_usage_error() {
        let (code, _, err) = call(&[]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("Usage"), "{err}");
    }

    #[test]
    fn version() {
        let (code, out, _) = call(&["version"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("rockfrac 0."));
    }

    #[test]
    fn missing_file_is_user_error() {
        let (code, _, err) = call(&["geometry", "/nonexistent/x.cfg", "--check"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("nonexistent"));
    }

    #[test]
    fn schema_error_prints_help() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.cfg");
        std::fs::write(&p, "[mesh]\np = 9\n").unwrap();
        let (code, _, err) = call(&["run", p.to_str().unwrap()]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("[loading]"), "{err}");
    }
}
