//! Implicit CSG shapes.
//!
//! Every shape exposes a level function `f` with `f(x) <= 0` inside. The
//! primitives use exact signed distances and the CSG operators combine them
//! with `min`/`max`, so the result stays 1-Lipschitz. Quadtree cut detection
//! relies on that bound.

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

pub type Point = Vector2<f64>;

/// Axis-aligned box in physical coordinates (mm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point,
    pub max: Point,
}

impl Aabb {
    pub fn new(min: Point, max: Point) -> Self {
        Self { min, max }
    }

    pub fn center(&self) -> Point {
        (self.min + self.max) * 0.5
    }

    pub fn extent(&self) -> Point {
        self.max - self.min
    }

    pub fn area(&self) -> f64 {
        let e = self.extent();
        e.x * e.y
    }

    pub fn contains_box(&self, other: &Aabb) -> bool {
        other.min.x >= self.min.x
            && other.min.y >= self.min.y
            && other.max.x <= self.max.x
            && other.max.y <= self.max.y
    }

    fn union(&self, other: &Aabb) -> Aabb {
        Aabb::new(
            Point::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            Point::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        )
    }

    fn intersection(&self, other: &Aabb) -> Aabb {
        Aabb::new(
            Point::new(self.min.x.max(other.min.x), self.min.y.max(other.min.y)),
            Point::new(self.max.x.min(other.max.x), self.max.y.min(other.max.y)),
        )
    }
}

/// CSG expression tree over disks, half-planes and capsules. Lengths in mm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ImplicitShape {
    Disk {
        center: [f64; 2],
        radius: f64,
    },
    /// Points with `(x - point) . normal <= 0`; the normal points outward.
    HalfPlane {
        point: [f64; 2],
        normal: [f64; 2],
    },
    /// All points within `half_width` of the segment `start`-`end`.
    Capsule {
        start: [f64; 2],
        end: [f64; 2],
        half_width: f64,
    },
    Union {
        a: Box<ImplicitShape>,
        b: Box<ImplicitShape>,
    },
    Difference {
        a: Box<ImplicitShape>,
        b: Box<ImplicitShape>,
    },
    Intersection {
        a: Box<ImplicitShape>,
        b: Box<ImplicitShape>,
    },
}

fn pt(a: [f64; 2]) -> Point {
    Point::new(a[0], a[1])
}

/// Distance from `x` to the segment `a`-`b`.
pub fn segment_distance(x: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return (x - a).norm();
    }
    let t = ((x - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (x - (a + ab * t)).norm()
}

impl ImplicitShape {
    pub fn disk(center: Point, radius: f64) -> Self {
        ImplicitShape::Disk {
            center: [center.x, center.y],
            radius,
        }
    }

    pub fn half_plane(point: Point, normal: Point) -> Self {
        ImplicitShape::HalfPlane {
            point: [point.x, point.y],
            normal: [normal.x, normal.y],
        }
    }

    pub fn capsule(start: Point, end: Point, half_width: f64) -> Self {
        ImplicitShape::Capsule {
            start: [start.x, start.y],
            end: [end.x, end.y],
            half_width,
        }
    }

    /// Axis-aligned rectangle as the intersection of four half-planes.
    pub fn rectangle(min: Point, max: Point) -> Self {
        let left = Self::half_plane(min, Point::new(-1.0, 0.0));
        let bottom = Self::half_plane(min, Point::new(0.0, -1.0));
        let right = Self::half_plane(max, Point::new(1.0, 0.0));
        let top = Self::half_plane(max, Point::new(0.0, 1.0));
        left.intersect(bottom).intersect(right).intersect(top)
    }

    pub fn union(self, other: ImplicitShape) -> Self {
        ImplicitShape::Union {
            a: Box::new(self),
            b: Box::new(other),
        }
    }

    pub fn subtract(self, other: ImplicitShape) -> Self {
        ImplicitShape::Difference {
            a: Box::new(self),
            b: Box::new(other),
        }
    }

    pub fn intersect(self, other: ImplicitShape) -> Self {
        ImplicitShape::Intersection {
            a: Box::new(self),
            b: Box::new(other),
        }
    }

    /// Level value: negative inside, positive outside, zero on the boundary.
    pub fn level(&self, x: Point) -> f64 {
        match self {
            ImplicitShape::Disk { center, radius } => (x - pt(*center)).norm() - radius,
            ImplicitShape::HalfPlane { point, normal } => {
                let n = pt(*normal);
                (x - pt(*point)).dot(&n) / n.norm()
            }
            ImplicitShape::Capsule {
                start,
                end,
                half_width,
            } => segment_distance(x, pt(*start), pt(*end)) - half_width,
            ImplicitShape::Union { a, b } => a.level(x).min(b.level(x)),
            ImplicitShape::Difference { a, b } => a.level(x).max(-b.level(x)),
            ImplicitShape::Intersection { a, b } => a.level(x).max(b.level(x)),
        }
    }

    /// Boundary points count as inside.
    pub fn contains(&self, x: Point) -> bool {
        self.level(x) <= 0.0
    }

    /// Bounding box of the inside region, `None` if unbounded.
    pub fn bounding_box(&self) -> Option<Aabb> {
        match self {
            ImplicitShape::Disk { center, radius } => {
                let c = pt(*center);
                let r = Point::new(*radius, *radius);
                Some(Aabb::new(c - r, c + r))
            }
            ImplicitShape::HalfPlane { .. } => None,
            ImplicitShape::Capsule {
                start,
                end,
                half_width,
            } => {
                let (s, e) = (pt(*start), pt(*end));
                let r = Point::new(*half_width, *half_width);
                Some(Aabb::new(s.inf(&e) - r, s.sup(&e) + r))
            }
            ImplicitShape::Union { a, b } => match (a.bounding_box(), b.bounding_box()) {
                (Some(x), Some(y)) => Some(x.union(&y)),
                _ => None,
            },
            ImplicitShape::Difference { a, .. } => a.bounding_box(),
            ImplicitShape::Intersection { .. } => self.clipping_box().filter(|bb| {
                bb.min.x.is_finite()
                    && bb.min.y.is_finite()
                    && bb.max.x.is_finite()
                    && bb.max.y.is_finite()
            }),
        }
    }

    fn clipping_box(&self) -> Option<Aabb> {
        match self {
            ImplicitShape::HalfPlane { point, normal } => {
                let inf = f64::INFINITY;
                let (p, n) = (pt(*point), pt(*normal));
                let mut bb = Aabb::new(Point::new(-inf, -inf), Point::new(inf, inf));
                if n.y == 0.0 && n.x != 0.0 {
                    if n.x > 0.0 {
                        bb.max.x = p.x;
                    } else {
                        bb.min.x = p.x;
                    }
                } else if n.x == 0.0 && n.y != 0.0 {
                    if n.y > 0.0 {
                        bb.max.y = p.y;
                    } else {
                        bb.min.y = p.y;
                    }
                }
                Some(bb)
            }
            ImplicitShape::Intersection { a, b } => match (a.clipping_box(), b.clipping_box()) {
                (Some(x), Some(y)) => Some(x.intersection(&y)),
                (Some(x), None) | (None, Some(x)) => Some(x),
                (None, None) => None,
            },
            other => other.bounding_box(),
        }
    }

    /// Copy of the shape moved by `offset`.
    pub fn translated(&self, offset: Point) -> ImplicitShape {
        let mv = |a: &[f64; 2]| [a[0] + offset.x, a[1] + offset.y];
        match self {
            ImplicitShape::Disk { center, radius } => ImplicitShape::Disk {
                center: mv(center),
                radius: *radius,
            },
            ImplicitShape::HalfPlane { point, normal } => ImplicitShape::HalfPlane {
                point: mv(point),
                normal: *normal,
            },
            ImplicitShape::Capsule {
                start,
                end,
                half_width,
            } => ImplicitShape::Capsule {
                start: mv(start),
                end: mv(end),
                half_width: *half_width,
            },
            ImplicitShape::Union { a, b } => a.translated(offset).union(b.translated(offset)),
            ImplicitShape::Difference { a, b } => {
                a.translated(offset).subtract(b.translated(offset))
            }
            ImplicitShape::Intersection { a, b } => {
                a.translated(offset).intersect(b.translated(offset))
            }
        }
    }

    /// Centerline segments of every capsule in the tree.
    pub fn capsule_centerlines(&self) -> Vec<(Point, Point)> {
        let mut out = Vec::new();
        self.collect_centerlines(&mut out);
        out
    }

    fn collect_centerlines(&self, out: &mut Vec<(Point, Point)>) {
        match self {
            ImplicitShape::Capsule { start, end, .. } => out.push((pt(*start), pt(*end))),
            ImplicitShape::Union { a, b }
            | ImplicitShape::Difference { a, b }
            | ImplicitShape::Intersection { a, b } => {
                a.collect_centerlines(out);
                b.collect_centerlines(out);
            }
            _ => {}
        }
    }

    /// Checks primitive parameters (positive radii, non-degenerate normals).
    pub fn validate(&self) -> Result<(), String> {
        match self {
            ImplicitShape::Disk { radius, .. } if !(*radius > 0.0) => {
                Err(format!("disk radius must be positive, got {radius}"))
            }
            ImplicitShape::HalfPlane { normal, .. } if pt(*normal).norm() == 0.0 => {
                Err("half-plane normal must be non-zero".to_string())
            }
            ImplicitShape::Capsule { half_width, .. } if !(*half_width > 0.0) => Err(format!(
                "capsule half width must be positive, got {half_width}"
            )),
            ImplicitShape::Union { a, b }
            | ImplicitShape::Difference { a, b }
            | ImplicitShape::Intersection { a, b } => {
                a.validate()?;
                b.validate()
            }
            _ => Ok(()),
        }
    }
}

/// Finite cell indicator: 1 inside the physical domain, `alpha_fict` outside.
pub fn indicator(shape: &ImplicitShape, x: Point, alpha_fict: f64) -> f64 {
    if shape.contains(x) {
        1.0
    } else {
        alpha_fict
    }
}
