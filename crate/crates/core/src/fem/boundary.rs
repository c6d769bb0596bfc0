//! Penalty Dirichlet boundaries on analytic curves.
//!
//! Curves are cut at every grid line they cross, and each piece gets a Gauss
//! rule in the curve parameter. No surface mesh is built.

use serde::{Deserialize, Serialize};

use super::mesh::EmbeddingMesh;
use super::FemError;
use crate::geometry::Point;
use crate::quadrature::gauss_legendre;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundaryPath {
    /// Circular arc of the given length centered on `mid_angle_deg`.
    Arc {
        center: [f64; 2],
        radius: f64,
        mid_angle_deg: f64,
        length: f64,
    },
    Segment {
        start: [f64; 2],
        end: [f64; 2],
    },
}

impl BoundaryPath {
    pub fn length(&self) -> f64 {
        match self {
            BoundaryPath::Arc { length, .. } => *length,
            BoundaryPath::Segment { start, end } => {
                (Point::new(end[0], end[1]) - Point::new(start[0], start[1])).norm()
            }
        }
    }

    fn arc_range(&self) -> Option<(Point, f64, f64, f64)> {
        match self {
            BoundaryPath::Arc {
                center,
                radius,
                mid_angle_deg,
                length,
            } => {
                let span = length / radius;
                Some((
                    Point::new(center[0], center[1]),
                    *radius,
                    mid_angle_deg.to_radians() - 0.5 * span,
                    span,
                ))
            }
            BoundaryPath::Segment { .. } => None,
        }
    }

    /// Point at curve parameter `t` in [0, 1].
    pub fn point(&self, t: f64) -> Point {
        match self {
            BoundaryPath::Arc { .. } => {
                let (c, r, theta0, span) = self.arc_range().unwrap();
                let theta = theta0 + t * span;
                c + Point::new(theta.cos(), theta.sin()) * r
            }
            BoundaryPath::Segment { start, end } => {
                let (a, b) = (Point::new(start[0], start[1]), Point::new(end[0], end[1]));
                a + (b - a) * t
            }
        }
    }

    /// Outward unit normal for arcs (radial), left normal for segments.
    pub fn normal(&self, t: f64) -> Point {
        match self {
            BoundaryPath::Arc { .. } => {
                let (c, _, _, _) = self.arc_range().unwrap();
                (self.point(t) - c).normalize()
            }
            BoundaryPath::Segment { start, end } => {
                let d = Point::new(end[0] - start[0], end[1] - start[1]).normalize();
                Point::new(-d.y, d.x)
            }
        }
    }

    /// Parameters in (0, 1) where the curve crosses a grid line.
    fn crossings(&self, mesh: &EmbeddingMesh) -> Vec<f64> {
        let mut ts = Vec::new();
        let xs: Vec<f64> = (0..=mesh.nx)
            .map(|i| mesh.origin.x + i as f64 * mesh.hx)
            .collect();
        let ys: Vec<f64> = (0..=mesh.ny)
            .map(|j| mesh.origin.y + j as f64 * mesh.hy)
            .collect();
        match self {
            BoundaryPath::Arc { .. } => {
                let (c, r, theta0, span) = self.arc_range().unwrap();
                let mut push_angle = |base: f64| {
                    for k in -2..=2 {
                        let t = (base + 2.0 * std::f64::consts::PI * k as f64 - theta0) / span;
                        if t > 0.0 && t < 1.0 {
                            ts.push(t);
                        }
                    }
                };
                for x in xs {
                    let cx = (x - c.x) / r;
                    if cx.abs() <= 1.0 {
                        push_angle(cx.acos());
                        push_angle(-cx.acos());
                    }
                }
                for y in ys {
                    let sy = (y - c.y) / r;
                    if sy.abs() <= 1.0 {
                        push_angle(sy.asin());
                        push_angle(std::f64::consts::PI - sy.asin());
                    }
                }
            }
            BoundaryPath::Segment { start, end } => {
                let (a, b) = (Point::new(start[0], start[1]), Point::new(end[0], end[1]));
                let d = b - a;
                for x in xs {
                    if d.x != 0.0 {
                        ts.push((x - a.x) / d.x);
                    }
                }
                for y in ys {
                    if d.y != 0.0 {
                        ts.push((y - a.y) / d.y);
                    }
                }
                ts.retain(|t| *t > 0.0 && *t < 1.0);
            }
        }
        ts
    }
}

/// Quadrature point on a boundary curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub element: usize,
    pub xi: [f64; 2],
    pub position: Point,
    pub normal: Point,
    /// Curve parameter in [0, 1].
    pub t: f64,
    /// Arc-length weight, mm.
    pub weight: f64,
}

/// Gauss points along `path`, `order` per piece between grid crossings.
pub fn boundary_quadrature(
    path: &BoundaryPath,
    mesh: &EmbeddingMesh,
    order: usize,
) -> Result<Vec<BoundaryPoint>, FemError> {
    let mut breaks = path.crossings(mesh);
    breaks.push(0.0);
    breaks.push(1.0);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let (gx, gw) = gauss_legendre(order);
    let length = path.length();
    let mut out = Vec::new();
    for piece in breaks.windows(2) {
        let (t0, t1) = (piece[0], piece[1]);
        let mid = path.point(0.5 * (t0 + t1));
        let (e, _) = mesh.locate(mid).ok_or_else(|| {
            FemError::InvalidInput(format!("boundary curve leaves the mesh at {mid:?}"))
        })?;
        let lo = mesh.element_bounds(e).min;
        for (g, w) in gx.iter().zip(&gw) {
            let t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * g;
            let x = path.point(t);
            let xi = [
                (2.0 * (x.x - lo.x) / mesh.hx - 1.0).clamp(-1.0, 1.0),
                (2.0 * (x.y - lo.y) / mesh.hy - 1.0).clamp(-1.0, 1.0),
            ];
            out.push(BoundaryPoint {
                element: e,
                xi,
                position: x,
                normal: path.normal(t),
                t,
                weight: 0.5 * (t1 - t0) * w * length,
            });
        }
    }
    Ok(out)
}

/// Penalty constraint `u_c = value_c` on the constrained components. With
/// `value_end` set the prescribed value varies linearly along the curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirichletArc {
    pub path: BoundaryPath,
    pub constrain: [bool; 2],
    pub value: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_end: Option<[f64; 2]>,
    pub penalty: f64,
}

impl DirichletArc {
    pub fn value_at(&self, t: f64) -> [f64; 2] {
        match self.value_end {
            None => self.value,
            Some(end) => [
                self.value[0] + t * (end[0] - self.value[0]),
                self.value[1] + t * (end[1] - self.value[1]),
            ],
        }
    }

    pub fn validate(&self) -> Result<(), FemError> {
        if !(self.path.length() > 0.0) {
            return Err(FemError::InvalidInput(
                "Dirichlet curve must have positive length".into(),
            ));
        }
        if !(self.penalty > 0.0) {
            return Err(FemError::InvalidInput(format!(
                "penalty must be positive, got {}",
                self.penalty
            )));
        }
        Ok(())
    }
}

/// A Dirichlet curve together with its quadrature on a given mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyBoundary {
    pub arc: DirichletArc,
    pub points: Vec<BoundaryPoint>,
}

impl PenaltyBoundary {
    pub fn new(arc: DirichletArc, mesh: &EmbeddingMesh) -> Result<Self, FemError> {
        arc.validate()?;
        let points = boundary_quadrature(&arc.path, mesh, 2 * (mesh.degree + 1))?;
        Ok(Self { arc, points })
    }
}
