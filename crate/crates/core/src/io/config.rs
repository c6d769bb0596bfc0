//! Run configuration: TOML sections `geometry`, `mesh`, `material`,
//! `solver`, `loading` and `output`. Key reference in `docs/config.md`.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::SchemaError;
use crate::fem::DirichletArc;
use crate::geometry::{DnbdGeometry, ImplicitShape};
use crate::material::{MaterialCard, RockPreset};
use crate::solver::{LoadSchedule, MeshSpec, StaggeredConfig, TopArcConstraint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub geometry: GeometryBlock,
    #[serde(default)]
    pub mesh: MeshSpec,
    pub material: MaterialBlock,
    #[serde(default)]
    pub solver: StaggeredConfig,
    #[serde(default)]
    pub loading: LoadSchedule,
    #[serde(default)]
    pub output: OutputBlock,
}

/// Either a DNBD specimen or a raw CSG shape with its own supports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryBlock {
    /// Out-of-plane thickness, mm.
    #[serde(default = "default_thickness")]
    pub thickness: f64,
    #[serde(default)]
    pub top_arc: TopArcConstraint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dnbd: Option<DnbdGeometry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csg: Option<CsgSpecimen>,
}

fn default_thickness() -> f64 {
    20.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsgSpecimen {
    pub shape: ImplicitShape,
    /// Prescribed values are per unit load; curves with zero values are
    /// fixed supports.
    pub supports: Vec<DirichletArc>,
    #[serde(default = "default_load_direction")]
    pub load_direction: [f64; 2],
}

fn default_load_direction() -> [f64; 2] {
    [0.0, -1.0]
}

/// A preset with optional overrides, or a full card when `preset` is absent.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<RockPreset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub youngs_modulus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poisson_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gc_tensile: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gc_shear: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l0_tensile: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l0_shear: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensile_strength: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shear_strength: Option<f64>,
}

impl MaterialBlock {
    pub fn preset(p: RockPreset) -> Self {
        Self {
            preset: Some(p),
            ..Self::default()
        }
    }

    pub fn card(&self) -> Result<MaterialCard, SchemaError> {
        let base = self.preset.map(RockPreset::card);
        let pick = |key: &str, v: Option<f64>, from: Option<f64>| {
            v.or(from).ok_or_else(|| {
                SchemaError::new(
                    format!("material.{key}"),
                    "required when no preset is given",
                )
            })
        };
        let b = base.as_ref();
        let card = MaterialCard {
            youngs_modulus: pick(
                "youngs_modulus",
                self.youngs_modulus,
                b.map(|c| c.youngs_modulus),
            )?,
            poisson_ratio: pick(
                "poisson_ratio",
                self.poisson_ratio,
                b.map(|c| c.poisson_ratio),
            )?,
            gc_tensile: pick("gc_tensile", self.gc_tensile, b.map(|c| c.gc_tensile))?,
            gc_shear: pick("gc_shear", self.gc_shear, b.map(|c| c.gc_shear))?,
            l0_tensile: pick("l0_tensile", self.l0_tensile, b.map(|c| c.l0_tensile))?,
            l0_shear: pick("l0_shear", self.l0_shear, b.map(|c| c.l0_shear))?,
            eta: self
                .eta
                .or(b.map(|c| c.eta))
                .unwrap_or_else(crate::material::default_eta),
            tensile_strength: pick(
                "tensile_strength",
                self.tensile_strength,
                b.map(|c| c.tensile_strength),
            )?,
            shear_strength: pick(
                "shear_strength",
                self.shear_strength,
                b.map(|c| c.shear_strength),
            )?,
        };
        card.validate()
            .map_err(|e| SchemaError::new("material", e.to_string()))?;
        Ok(card)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    /// Legacy ASCII VTK snapshots.
    Vtk,
    /// Load-displacement CSV.
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub directory: PathBuf,
    /// Snapshot every n-th load step; 0 writes only the final state.
    pub snapshot_every: usize,
    /// Visualization samples per element and direction.
    pub samples_per_element: usize,
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("output"),
            snapshot_every: 10,
            samples_per_element: 2,
            formats: vec![OutputFormat::Vtk, OutputFormat::Csv],
        }
    }
}

impl OutputBlock {
    pub fn wants(&self, f: OutputFormat) -> bool {
        self.formats.contains(&f)
    }
}

/// Parses and validates a configuration. Unknown keys are errors.
pub fn parse_config(text: &str) -> Result<SimulationConfig, SchemaError> {
    let de = toml::Deserializer::parse(text).map_err(|e| SchemaError::new("", e.message()))?;
    let config: SimulationConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { String::new() } else { path };
        SchemaError::new(path, e.into_inner().message())
    })?;
    config.validate()?;
    Ok(config)
}

/// Normalized TOML text; parses back to an equal config.
pub fn serialize_config(config: &SimulationConfig) -> String {
    toml::to_string(config).expect("configuration is always representable in TOML")
}

impl SimulationConfig {
    /// The shipped DNBD setup for a preset rock.
    pub fn dnbd(preset: RockPreset) -> Self {
        Self {
            geometry: GeometryBlock {
                thickness: default_thickness(),
                top_arc: TopArcConstraint::Both,
                dnbd: Some(DnbdGeometry::default()),
                csg: None,
            },
            mesh: MeshSpec::default(),
            material: MaterialBlock::preset(preset),
            solver: StaggeredConfig::default(),
            loading: LoadSchedule::default(),
            output: OutputBlock::default(),
        }
    }

    pub fn validate(&self) -> Result<(), SchemaError> {
        let g = &self.geometry;
        if !(g.thickness > 0.0) {
            return Err(SchemaError::new(
                "geometry.thickness",
                format!("must be positive, got {}", g.thickness),
            ));
        }
        match (&g.dnbd, &g.csg) {
            (Some(d), None) => d
                .validate()
                .map_err(|e| SchemaError::new("geometry.dnbd", e.to_string()))?,
            (None, Some(c)) => {
                c.shape
                    .validate()
                    .map_err(|e| SchemaError::new("geometry.csg.shape", e))?;
                if c.supports.is_empty() {
                    return Err(SchemaError::new(
                        "geometry.csg.supports",
                        "at least one support curve is required",
                    ));
                }
                for (k, s) in c.supports.iter().enumerate() {
                    s.validate().map_err(|e| {
                        SchemaError::new(format!("geometry.csg.supports[{k}]"), e.to_string())
                    })?;
                }
                let [dx, dy] = c.load_direction;
                if !(dx.hypot(dy) > 0.0) {
                    return Err(SchemaError::new(
                        "geometry.csg.load_direction",
                        "must be a nonzero vector",
                    ));
                }
            }
            _ => {
                return Err(SchemaError::new(
                    "geometry",
                    "exactly one of `dnbd` or `csg` is required",
                ))
            }
        }
        if !(1..=crate::fem::MAX_DEGREE).contains(&self.mesh.p) {
            return Err(SchemaError::new(
                "mesh.p",
                format!("{} not supported, expected 1..=4", self.mesh.p),
            ));
        }
        self.mesh
            .validate()
            .map_err(|e| SchemaError::new("mesh", e.to_string()))?;
        self.material.card()?;
        self.solver
            .validate()
            .map_err(|e| SchemaError::new("solver", e.to_string()))?;
        self.loading
            .validate()
            .map_err(|e| SchemaError::new("loading", e.to_string()))?;
        if self.output.samples_per_element == 0 {
            return Err(SchemaError::new(
                "output.samples_per_element",
                "must be >= 1",
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[geometry.dnbd]\nradius = 47.0\nnotch_top = 37.5\nnotch_bottom = 37.5\nnotch_width = 1.1\nnotch_offset = 0.0\nload_angle_deg = 15.0\nloading_arc_length = 10.0\n\n[material]\npreset = \"spk\"\n";

    #[test]
    fn minimal_config_fills_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c, SimulationConfig::dnbd(RockPreset::Spk));
        assert_eq!((c.mesh.nx, c.mesh.ny, c.mesh.p), (25, 25, 3));
        assert_eq!(c.solver.tolerance, 1e-5);
        assert_eq!(c.solver.penalty, 1e6);
        assert_eq!(c.loading.u_init, 5e-3);
        assert_eq!(c.loading.u_min, 5e-4);
        assert_eq!(c.material.card().unwrap(), MaterialCard::spk());
    }

    #[test]
    fn empty_file_needs_geometry() {
        let e = parse_config("").unwrap_err();
        assert!(e.reason.contains("geometry"), "{e}");
    }

    #[test]
    fn degree_out_of_range() {
        let e = parse_config(&format!("{MINIMAL}\n[mesh]\np = 9\n")).unwrap_err();
        assert_eq!(e.path, "mesh.p");
    }

    #[test]
    fn unknown_and_mistyped_keys_carry_paths() {
        let e = parse_config(&format!("{MINIMAL}\n[solver]\ntolerence = 1e-5\n")).unwrap_err();
        assert!(e.path.starts_with("solver"), "{e}");
        assert!(e.reason.contains("tolerence"), "{e}");
        let e = parse_config(&format!("{MINIMAL}\n[loading]\nkappa = \"fast\"\n")).unwrap_err();
        assert_eq!(e.path, "loading.kappa");
        let e =
            parse_config(&MINIMAL.replace("preset = \"spk\"", "preset = \"granite\"")).unwrap_err();
        assert_eq!(e.path, "material.preset");
    }

    #[test]
    fn full_card_without_preset() {
        let e = parse_config(&MINIMAL.replace("preset = \"spk\"", "youngs_modulus = 40.0"))
            .unwrap_err();
        assert_eq!(e.path, "material.poisson_ratio");
        let over = MINIMAL.replace("preset = \"spk\"", "preset = \"pfd\"\ngc_shear = 1.7654e-4");
        let card = parse_config(&over).unwrap().material.card().unwrap();
        assert_eq!(card.gc_shear, 1.7654e-4);
        assert_eq!(card.l0_shear, MaterialCard::pfd().l0_shear);
    }

    #[test]
    fn geometry_needs_exactly_one_kind() {
        let e = parse_config("[geometry]\nthickness = 20.0\n[material]\npreset = \"spk\"\n")
            .unwrap_err();
        assert_eq!(e.path, "geometry");
    }

    #[test]
    fn round_trip() {
        let mut c = SimulationConfig::dnbd(RockPreset::Pfd);
        c.mesh.quad_order = Some(5);
        c.material.gc_shear = Some(1.7654e-4);
        c.geometry.top_arc = TopArcConstraint::Vertical;
        let text = serialize_config(&c);
        assert_eq!(parse_config(&text).unwrap(), c);
        assert_eq!(serialize_config(&parse_config(&text).unwrap()), text);
    }
}
