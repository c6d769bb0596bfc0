//! Quadtree integration cells for elements cut by the geometry.

use super::shape::{Aabb, ImplicitShape, Point};
use crate::fem::EmbeddingMesh;
use crate::quadrature::gauss_legendre;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellClass {
    Physical,
    Fictitious,
    Cut,
}

/// Quadrature point in reference element coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellPoint {
    pub xi: [f64; 2],
    /// Weight with respect to the reference element [-1, 1]^2.
    pub weight: f64,
    /// Indicator value: exactly 1.0 or `alpha_fict`.
    pub alpha: f64,
}

/// Leaf of the quadtree over one element.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationCell {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    pub class: CellClass,
    pub points: Vec<CellPoint>,
}

impl IntegrationCell {
    pub fn reference_area(&self) -> f64 {
        (self.hi[0] - self.lo[0]) * (self.hi[1] - self.lo[1])
    }
}

/// Lipschitz test on the level function over a box.
fn classify_box(shape: &ImplicitShape, b: &Aabb) -> Option<CellClass> {
    let radius = 0.5 * b.extent().norm();
    let f = shape.level(b.center());
    if f < -radius {
        Some(CellClass::Physical)
    } else if f > radius {
        Some(CellClass::Fictitious)
    } else {
        None
    }
}

struct Partitioner<'a> {
    element: Aabb,
    shape: &'a ImplicitShape,
    depth: usize,
    alpha_fict: f64,
    rule: (Vec<f64>, Vec<f64>),
    out: Vec<IntegrationCell>,
}

impl Partitioner<'_> {
    fn to_physical(&self, xi: [f64; 2]) -> Point {
        let c = self.element.center();
        let h = self.element.extent() * 0.5;
        Point::new(c.x + h.x * xi[0], c.y + h.y * xi[1])
    }

    fn leaf(&mut self, lo: [f64; 2], hi: [f64; 2], known: Option<CellClass>) {
        let (gx, gw) = &self.rule;
        let (cx, cy) = (0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]));
        let (hx, hy) = (0.5 * (hi[0] - lo[0]), 0.5 * (hi[1] - lo[1]));
        let mut points = Vec::with_capacity(gx.len() * gx.len());
        let (mut any_in, mut any_out) = (false, false);
        for (ey, wy) in gx.iter().zip(gw) {
            for (ex, wx) in gx.iter().zip(gw) {
                let xi = [cx + hx * ex, cy + hy * ey];
                let alpha = match known {
                    Some(CellClass::Physical) => 1.0,
                    Some(CellClass::Fictitious) => self.alpha_fict,
                    _ => {
                        if self.shape.contains(self.to_physical(xi)) {
                            1.0
                        } else {
                            self.alpha_fict
                        }
                    }
                };
                any_in |= alpha == 1.0;
                any_out |= alpha != 1.0;
                points.push(CellPoint {
                    xi,
                    weight: wx * wy * hx * hy,
                    alpha,
                });
            }
        }
        let class = known.unwrap_or_else(|| {
            for corner in [lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]] {
                if self.shape.contains(self.to_physical(corner)) {
                    any_in = true;
                } else {
                    any_out = true;
                }
            }
            match (any_in, any_out) {
                (true, false) => CellClass::Physical,
                (false, true) => CellClass::Fictitious,
                _ => CellClass::Cut,
            }
        });
        self.out.push(IntegrationCell {
            lo,
            hi,
            class,
            points,
        });
    }

    fn recurse(&mut self, lo: [f64; 2], hi: [f64; 2], level: usize) {
        let phys = Aabb::new(self.to_physical(lo), self.to_physical(hi));
        match classify_box(self.shape, &phys) {
            Some(class) => self.leaf(lo, hi, Some(class)),
            None if level >= self.depth => self.leaf(lo, hi, None),
            None => {
                let mid = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
                self.recurse(lo, mid, level + 1);
                self.recurse([mid[0], lo[1]], [hi[0], mid[1]], level + 1);
                self.recurse([lo[0], mid[1]], [mid[0], hi[1]], level + 1);
                self.recurse(mid, hi, level + 1);
            }
        }
    }
}

/// Subdivides an element into quadtree leaves up to `depth` levels and places
/// an `order` x `order` Gauss rule on each leaf.
///
/// A cell is left undivided only when the level-function bound proves it
/// lies entirely on one side of the boundary. Thin capsule notches are
/// therefore always detected.
pub fn partition_element(
    element: &Aabb,
    shape: &ImplicitShape,
    depth: usize,
    order: usize,
    alpha_fict: f64,
) -> Vec<IntegrationCell> {
    let mut p = Partitioner {
        element: *element,
        shape,
        depth,
        alpha_fict,
        rule: gauss_legendre(order.max(1)),
        out: Vec::new(),
    };
    p.recurse([-1.0, -1.0], [1.0, 1.0], 0);
    // a conservative bound may split cells that turn out uniform
    let first = p.out[0].class;
    if p.out.len() > 1 && first != CellClass::Cut && p.out.iter().all(|c| c.class == first) {
        p.out.clear();
        p.leaf([-1.0, -1.0], [1.0, 1.0], Some(first));
    }
    p.out
}

/// Physical area recovered by the quadtree quadrature over the whole mesh.
pub fn measure_physical_area(
    shape: &ImplicitShape,
    mesh: &EmbeddingMesh,
    depth: usize,
    order: usize,
) -> f64 {
    let jac = 0.25 * mesh.hx * mesh.hy;
    let mut area = 0.0;
    for e in 0..mesh.n_elements() {
        for cell in partition_element(&mesh.element_bounds(e), shape, depth, order, 0.0) {
            area += cell
                .points
                .iter()
                .filter(|p| p.alpha == 1.0)
                .map(|p| p.weight)
                .sum::<f64>()
                * jac;
        }
    }
    area
}
