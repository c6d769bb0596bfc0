//! Double-edge notched Brazilian disk (DNBD) specimen.

use serde::{Deserialize, Serialize};

use super::shape::{ImplicitShape, Point};
use super::GeometryError;

/// Specimen dimensions in mm, loading angle in degrees.
///
/// The load axis is vertical. The notch line passes through the disk center
/// and is rotated by `load_angle_deg` from the load axis; the top notch
/// enters from the upper rim, the bottom notch from the lower rim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DnbdGeometry {
    pub radius: f64,
    pub notch_top: f64,
    pub notch_bottom: f64,
    pub notch_width: f64,
    /// Perpendicular distance between the two notch centerlines.
    pub notch_offset: f64,
    pub load_angle_deg: f64,
    pub loading_arc_length: f64,
}

impl Default for DnbdGeometry {
    /// Water-jet specimen: R = 47, a = 37.5, w = 1.1, no offset, 15 degrees.
    fn default() -> Self {
        Self {
            radius: 47.0,
            notch_top: 37.5,
            notch_bottom: 37.5,
            notch_width: 1.1,
            notch_offset: 0.0,
            load_angle_deg: 15.0,
            loading_arc_length: 10.0,
        }
    }
}

/// One notch: capsule centerline and the rim entry point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Notch {
    pub rim: Point,
    /// Center of the semicircular tip.
    pub tip_center: Point,
    /// Extreme point of the tip on the centerline.
    pub tip: Point,
    pub half_width: f64,
    pub length: f64,
    /// Signed perpendicular offset of the centerline from the disk center.
    pub offset: f64,
}

impl DnbdGeometry {
    pub fn validate(&self) -> Result<(), GeometryError> {
        let bad = |msg: String| Err(GeometryError::InvalidDnbd(msg));
        if !(self.radius > 0.0) {
            return bad(format!("radius must be positive, got {}", self.radius));
        }
        if !(self.notch_width > 0.0) {
            return bad(format!(
                "notch width must be positive, got {}",
                self.notch_width
            ));
        }
        if self.notch_top < 0.0 || self.notch_bottom < 0.0 {
            return bad("notch lengths must be non-negative".into());
        }
        if !(self.notch_top + self.notch_bottom < 2.0 * self.radius) {
            return bad(format!(
                "notches leave no ligament: a_t + a_b = {} >= 2R = {}",
                self.notch_top + self.notch_bottom,
                2.0 * self.radius
            ));
        }
        if !(self.notch_offset.abs() * 0.5 + self.notch_width * 0.5 < self.radius) {
            return bad("notch offset places the notch outside the disk".into());
        }
        if !(self.loading_arc_length > 0.0
            && self.loading_arc_length < std::f64::consts::PI * self.radius)
        {
            return bad(format!(
                "loading arc length must lie in (0, pi R), got {}",
                self.loading_arc_length
            ));
        }
        if !self.load_angle_deg.is_finite() {
            return bad("loading angle must be finite".into());
        }
        Ok(())
    }

    pub fn ligament(&self) -> f64 {
        2.0 * self.radius - self.notch_top - self.notch_bottom
    }

    /// Unit vector along the notch line, pointing to the top notch.
    pub fn notch_axis(&self) -> Point {
        let a = self.load_angle_deg.to_radians();
        Point::new(a.sin(), a.cos())
    }

    /// Unit vector perpendicular to the notch line.
    pub fn notch_normal(&self) -> Point {
        let a = self.load_angle_deg.to_radians();
        Point::new(a.cos(), -a.sin())
    }

    /// Top and bottom notches; `None` for zero-length notches.
    pub fn notches(&self) -> [Option<Notch>; 2] {
        let d = self.notch_axis();
        let n = self.notch_normal();
        let hw = 0.5 * self.notch_width;
        let make = |sign: f64, length: f64| {
            if length <= 0.0 {
                return None;
            }
            let offset = sign * 0.5 * self.notch_offset;
            let t_rim = (self.radius * self.radius - offset * offset).sqrt();
            let dir = d * sign;
            let base = n * offset;
            Some(Notch {
                rim: base + dir * t_rim,
                tip_center: base + dir * (t_rim - length + hw),
                tip: base + dir * (t_rim - length),
                half_width: hw,
                length,
                offset,
            })
        };
        [make(1.0, self.notch_top), make(-1.0, self.notch_bottom)]
    }

    pub fn build(&self) -> Result<ImplicitShape, GeometryError> {
        self.validate()?;
        let mut shape = ImplicitShape::disk(Point::zeros(), self.radius);
        for notch in self.notches().into_iter().flatten() {
            // Start the capsule outside the rim so the mouth is a clean cut.
            let outward = (notch.rim - notch.tip_center).normalize();
            let start = notch.rim + outward * self.notch_width;
            shape = shape.subtract(ImplicitShape::capsule(
                start,
                notch.tip_center,
                notch.half_width,
            ));
        }
        Ok(shape)
    }

    /// Exact area of the notched disk.
    pub fn analytic_area(&self) -> f64 {
        let r = self.radius;
        let mut area = std::f64::consts::PI * r * r;
        // integral of sqrt(R^2 - s^2) ds
        let prim = |s: f64| 0.5 * (s * (r * r - s * s).max(0.0).sqrt() + r * r * (s / r).asin());
        for notch in self.notches().into_iter().flatten() {
            let hw = notch.half_width;
            let o = notch.offset.abs();
            let t_rim = (r * r - o * o).sqrt();
            let t_in = t_rim - notch.length + hw;
            let strip = prim(o + hw) - prim(o - hw) - 2.0 * hw * t_in;
            area -= strip + 0.5 * std::f64::consts::PI * hw * hw;
        }
        area
    }
}
