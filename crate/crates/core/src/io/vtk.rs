//! Legacy ASCII VTK snapshots on a uniform resampling grid, and a small
//! reader for them.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{write_atomic, OutputError};
use crate::geometry::{indicator, Point};
use crate::solver::{Problem, SimulationState};

/// Resampling grid over the embedding mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotGrid {
    pub origin: Point,
    pub spacing: [f64; 2],
    /// Point counts per direction.
    pub dims: [usize; 2],
}

impl SnapshotGrid {
    pub fn new(problem: &Problem, samples_per_element: usize) -> Self {
        let m = &problem.disc.mesh;
        let n = samples_per_element.max(1);
        Self {
            origin: m.origin,
            spacing: [m.hx / n as f64, m.hy / n as f64],
            dims: [m.nx * n + 1, m.ny * n + 1],
        }
    }
}

fn push_values(out: &mut String, values: impl Iterator<Item = f64>) {
    for v in values {
        writeln!(out, "{v:e}").unwrap();
    }
}

/// Snapshot text. Phase fields are clamped to [0, 1] as the model does;
/// `s_viz = s_II - s_I` is 0 where intact, +1 in tensile and -1 in shear
/// cracks.
pub fn format_snapshot(
    problem: &Problem,
    u: &[f64],
    s_i: &[f64],
    s_ii: &[f64],
    samples_per_element: usize,
    title: &str,
) -> String {
    let disc = &problem.disc;
    let m = &disc.mesh;
    let n = samples_per_element.max(1);
    let grid = SnapshotGrid::new(problem, n);
    let [px, py] = grid.dims;
    let mut disp = Vec::with_capacity(px * py);
    let mut si = Vec::with_capacity(px * py);
    let mut sii = Vec::with_capacity(px * py);
    for j in 0..py {
        let iy = (j / n).min(m.ny - 1);
        let eta = 2.0 * (j - iy * n) as f64 / n as f64 - 1.0;
        for i in 0..px {
            let ix = (i / n).min(m.nx - 1);
            let xi = 2.0 * (i - ix * n) as f64 / n as f64 - 1.0;
            let e = m.element_index(ix, iy);
            disp.push(disc.vector_at_reference(u, e, [xi, eta]).0);
            si.push(
                disc.scalar_at_reference(s_i, e, [xi, eta])
                    .0
                    .clamp(0.0, 1.0),
            );
            sii.push(
                disc.scalar_at_reference(s_ii, e, [xi, eta])
                    .0
                    .clamp(0.0, 1.0),
            );
        }
    }

    let mut out = String::new();
    let title: String = title.chars().filter(|c| *c != '\n').take(200).collect();
    writeln!(
        out,
        "# vtk DataFile Version 3.0\n{title}\nASCII\nDATASET STRUCTURED_POINTS"
    )
    .unwrap();
    writeln!(out, "DIMENSIONS {px} {py} 1").unwrap();
    writeln!(out, "ORIGIN {:e} {:e} 0", grid.origin.x, grid.origin.y).unwrap();
    writeln!(out, "SPACING {:e} {:e} 1", grid.spacing[0], grid.spacing[1]).unwrap();
    writeln!(out, "POINT_DATA {}", px * py).unwrap();
    writeln!(out, "VECTORS u double").unwrap();
    for d in &disp {
        writeln!(out, "{:e} {:e} 0", d.x, d.y).unwrap();
    }
    for (name, values) in [("s_I", &si), ("s_II", &sii)] {
        writeln!(out, "SCALARS {name} double 1\nLOOKUP_TABLE default").unwrap();
        push_values(&mut out, values.iter().copied());
    }
    writeln!(out, "SCALARS s_viz double 1\nLOOKUP_TABLE default").unwrap();
    push_values(&mut out, sii.iter().zip(&si).map(|(b, a)| b - a));

    let (cx, cy) = (px - 1, py - 1);
    writeln!(out, "CELL_DATA {}", cx * cy).unwrap();
    writeln!(out, "SCALARS alpha double 1\nLOOKUP_TABLE default").unwrap();
    let alpha = (0..cy).flat_map(|j| {
        (0..cx).map(move |i| {
            let c = grid.origin
                + Point::new(
                    (i as f64 + 0.5) * grid.spacing[0],
                    (j as f64 + 0.5) * grid.spacing[1],
                );
            indicator(&problem.shape, c, problem.config.alpha_fict)
        })
    });
    push_values(&mut out, alpha);
    out
}

pub fn write_snapshot(
    problem: &Problem,
    state: &SimulationState,
    samples_per_element: usize,
    path: &Path,
) -> Result<(), OutputError> {
    let title = format!(
        "rockfrac step {} displacement {:e} mm",
        state.steps.len().saturating_sub(1),
        state.displacement
    );
    let text = format_snapshot(
        problem,
        &state.u,
        &state.s_i,
        &state.s_ii,
        samples_per_element,
        &title,
    );
    write_atomic(path, text.as_bytes())
}

/// Parsed legacy structured-points file. Arrays hold all components
/// interleaved.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VtkDataset {
    pub title: String,
    pub dims: [usize; 3],
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
    pub point_data: BTreeMap<String, (usize, Vec<f64>)>,
    pub cell_data: BTreeMap<String, (usize, Vec<f64>)>,
}

/// Reads the ASCII STRUCTURED_POINTS subset written by [`format_snapshot`].
pub fn read_vtk(text: &str) -> Result<VtkDataset, OutputError> {
    let bad = |m: &str| OutputError::Vtk(m.to_string());
    let mut lines = text.lines();
    let version = lines.next().ok_or_else(|| bad("empty file"))?;
    if !version.starts_with("# vtk DataFile Version") {
        return Err(bad("missing version line"));
    }
    let mut ds = VtkDataset {
        title: lines
            .next()
            .ok_or_else(|| bad("missing title"))?
            .to_string(),
        ..Default::default()
    };
    if lines.next().map(str::trim) != Some("ASCII") {
        return Err(bad("only ASCII files are supported"));
    }
    let mut tokens = lines.flat_map(str::split_whitespace);
    let mut next = || tokens.next();
    let num = |t: Option<&str>| -> Result<f64, OutputError> {
        t.ok_or_else(|| bad("unexpected end of file"))?
            .parse::<f64>()
            .map_err(|e| OutputError::Vtk(e.to_string()))
    };
    if (next(), next()) != (Some("DATASET"), Some("STRUCTURED_POINTS")) {
        return Err(bad("expected DATASET STRUCTURED_POINTS"));
    }
    // (section point count, is point data)
    let mut section: Option<(usize, bool)> = None;
    while let Some(key) = next() {
        match key {
            "DIMENSIONS" => {
                for d in 0..3 {
                    ds.dims[d] = num(next())? as usize;
                }
            }
            "ORIGIN" => {
                for d in 0..3 {
                    ds.origin[d] = num(next())?;
                }
            }
            "SPACING" => {
                for d in 0..3 {
                    ds.spacing[d] = num(next())?;
                }
            }
            "POINT_DATA" | "CELL_DATA" => {
                let count = num(next())? as usize;
                section = Some((count, key == "POINT_DATA"));
            }
            "SCALARS" | "VECTORS" => {
                let (count, is_point) =
                    section.ok_or_else(|| bad("attribute outside a data section"))?;
                let name = next()
                    .ok_or_else(|| bad("missing attribute name"))?
                    .to_string();
                let _ty = next();
                let comps = if key == "VECTORS" {
                    3
                } else {
                    let c = num(next())? as usize;
                    if next() != Some("LOOKUP_TABLE") {
                        return Err(bad("expected LOOKUP_TABLE"));
                    }
                    next();
                    c
                };
                let values = (0..count * comps)
                    .map(|_| num(next()))
                    .collect::<Result<Vec<_>, _>>()?;
                let target = if is_point {
                    &mut ds.point_data
                } else {
                    &mut ds.cell_data
                };
                target.insert(name, (comps, values));
            }
            other => return Err(OutputError::Vtk(format!("unexpected token '{other}'"))),
        }
    }
    let points = ds.dims.iter().product::<usize>();
    let cells = ds
        .dims
        .iter()
        .map(|&d| d.saturating_sub(1).max(1))
        .product::<usize>();
    for (c, v) in ds.point_data.values() {
        if v.len() != points * c {
            return Err(bad("point array length does not match DIMENSIONS"));
        }
    }
    for (c, v) in ds.cell_data.values() {
        if v.len() != cells * c {
            return Err(bad("cell array length does not match DIMENSIONS"));
        }
    }
    Ok(ds)
}
