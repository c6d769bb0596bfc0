//! Cartesian embedding mesh and per-field degree-of-freedom numbering.

use super::basis::MAX_DEGREE;
use super::FemError;
use crate::geometry::{Aabb, Point};

/// Uniform Cartesian mesh of the embedding box with uniform degree `degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMesh {
    pub origin: Point,
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    pub degree: usize,
}

impl EmbeddingMesh {
    pub fn new(
        origin: Point,
        size: Point,
        nx: usize,
        ny: usize,
        degree: usize,
    ) -> Result<Self, FemError> {
        if nx == 0 || ny == 0 {
            return Err(FemError::InvalidMesh(format!(
                "element counts must be >= 1, got {nx} x {ny}"
            )));
        }
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(FemError::UnsupportedDegree(degree));
        }
        if !(size.x > 0.0 && size.y > 0.0) {
            return Err(FemError::InvalidMesh(
                "mesh box must have positive size".into(),
            ));
        }
        Ok(Self {
            origin,
            nx,
            ny,
            hx: size.x / nx as f64,
            hy: size.y / ny as f64,
            degree,
        })
    }

    /// Mesh over `bbox` grown by `margin` on every side.
    pub fn covering(
        bbox: &Aabb,
        margin: f64,
        nx: usize,
        ny: usize,
        degree: usize,
    ) -> Result<Self, FemError> {
        let m = Point::new(margin, margin);
        Self::new(bbox.min - m, bbox.extent() + m * 2.0, nx, ny, degree)
    }

    pub fn n_elements(&self) -> usize {
        self.nx * self.ny
    }

    pub fn element_index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn element_coords(&self, e: usize) -> (usize, usize) {
        (e % self.nx, e / self.nx)
    }

    pub fn bounds(&self) -> Aabb {
        Aabb::new(
            self.origin,
            self.origin + Point::new(self.hx * self.nx as f64, self.hy * self.ny as f64),
        )
    }

    pub fn element_bounds(&self, e: usize) -> Aabb {
        let (ix, iy) = self.element_coords(e);
        let min = self.origin + Point::new(ix as f64 * self.hx, iy as f64 * self.hy);
        Aabb::new(min, min + Point::new(self.hx, self.hy))
    }

    /// Element containing `x` and the reference coordinates of `x` in it.
    /// Points on shared edges go to the element with the larger index;
    /// points outside the box return `None`.
    pub fn locate(&self, x: Point) -> Option<(usize, [f64; 2])> {
        let b = self.bounds();
        let tol = 1e-12 * (self.hx + self.hy);
        if x.x < b.min.x - tol || x.x > b.max.x + tol || x.y < b.min.y - tol || x.y > b.max.y + tol
        {
            return None;
        }
        let fx = (x.x - self.origin.x) / self.hx;
        let fy = (x.y - self.origin.y) / self.hy;
        let ix = (fx.floor().max(0.0) as usize).min(self.nx - 1);
        let iy = (fy.floor().max(0.0) as usize).min(self.ny - 1);
        let xi = 2.0 * (fx - ix as f64) - 1.0;
        let eta = 2.0 * (fy - iy as f64) - 1.0;
        Some((
            self.element_index(ix, iy),
            [xi.clamp(-1.0, 1.0), eta.clamp(-1.0, 1.0)],
        ))
    }

    pub fn to_physical(&self, e: usize, xi: [f64; 2]) -> Point {
        let c = self.element_bounds(e).center();
        Point::new(c.x + 0.5 * self.hx * xi[0], c.y + 0.5 * self.hy * xi[1])
    }

    /// Determinant of the reference-to-physical map.
    pub fn jacobian(&self) -> f64 {
        0.25 * self.hx * self.hy
    }
}

/// Global numbering of the scalar hierarchic basis; vector fields interleave
/// components as `2 * scalar + component`.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    degree: usize,
    per_element: usize,
    element_dofs: Vec<usize>,
    n_scalar: usize,
}

impl DofMap {
    pub fn new(mesh: &EmbeddingMesh) -> Self {
        let p = mesh.degree;
        let (nx, ny) = (mesh.nx, mesh.ny);
        let modes = p - 1;
        let n_vertices = (nx + 1) * (ny + 1);
        let n_h_edges = (ny + 1) * nx;
        let n_v_edges = (nx + 1) * ny;
        let h_base = n_vertices;
        let v_base = h_base + n_h_edges * modes;
        let f_base = v_base + n_v_edges * modes;
        let n_scalar = f_base + nx * ny * modes * modes;

        let per_element = (p + 1) * (p + 1);
        let mut element_dofs = Vec::with_capacity(per_element * nx * ny);
        for iy in 0..ny {
            for ix in 0..nx {
                for b in 0..=p {
                    for a in 0..=p {
                        let dof = match (a < 2, b < 2) {
                            (true, true) => (iy + b) * (nx + 1) + ix + a,
                            (false, true) => h_base + ((iy + b) * nx + ix) * modes + (a - 2),
                            (true, false) => v_base + (iy * (nx + 1) + ix + a) * modes + (b - 2),
                            (false, false) => {
                                f_base + (iy * nx + ix) * modes * modes + (b - 2) * modes + (a - 2)
                            }
                        };
                        element_dofs.push(dof);
                    }
                }
            }
        }
        Self {
            degree: p,
            per_element,
            element_dofs,
            n_scalar,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_scalar(&self) -> usize {
        self.n_scalar
    }

    pub fn n_vector(&self) -> usize {
        2 * self.n_scalar
    }

    pub fn per_element(&self) -> usize {
        self.per_element
    }

    pub fn n_elements(&self) -> usize {
        self.element_dofs.len() / self.per_element
    }

    /// Scalar dofs of element `e` in local basis order.
    pub fn element(&self, e: usize) -> &[usize] {
        &self.element_dofs[e * self.per_element..(e + 1) * self.per_element]
    }

    /// Vector dofs of element `e`: `[2 d0, 2 d0 + 1, 2 d1, ...]`.
    pub fn element_vector(&self, e: usize) -> Vec<usize> {
        self.element(e)
            .iter()
            .flat_map(|&d| [2 * d, 2 * d + 1])
            .collect()
    }

    /// Dof of the vertex hat at grid vertex `(ix, iy)`; needs the mesh width.
    pub fn vertex(&self, mesh: &EmbeddingMesh, ix: usize, iy: usize) -> usize {
        iy * (mesh.nx + 1) + ix
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mesh(p: usize) -> EmbeddingMesh {
        EmbeddingMesh::new(Point::zeros(), Point::new(3.0, 2.0), 3, 2, p).unwrap()
    }

    #[test]
    fn dof_counts() {
        for p in 1..=4 {
            let m = mesh(p);
            let d = DofMap::new(&m);
            // (p nx + 1)(p ny + 1) for the full tensor space
            assert_eq!(d.n_scalar(), (p * 3 + 1) * (p * 2 + 1), "p = {p}");
        }
    }

    #[test]
    fn every_dof_is_used() {
        let m = mesh(3);
        let d = DofMap::new(&m);
        let mut seen = vec![false; d.n_scalar()];
        for e in 0..m.n_elements() {
            for &i in d.element(e) {
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn shared_edge_dofs_match() {
        let p = 3;
        let m = mesh(p);
        let d = DofMap::new(&m);
        let left = d.element(m.element_index(0, 0));
        let right = d.element(m.element_index(1, 0));
        // right edge of `left` (a = 1) equals left edge of `right` (a = 0)
        for b in 0..=p {
            assert_eq!(left[b * (p + 1) + 1], right[b * (p + 1)]);
        }
        let up = d.element(m.element_index(0, 1));
        for a in 0..=p {
            assert_eq!(left[(p + 1) + a], up[a]);
        }
    }

    #[test]
    fn locate_round_trips() {
        let m = mesh(2);
        let x = Point::new(2.25, 0.5);
        let (e, xi) = m.locate(x).unwrap();
        assert_eq!(m.element_coords(e), (2, 0));
        assert!((m.to_physical(e, xi) - x).norm() < 1e-14);
        assert!(m.locate(Point::new(-0.1, 0.0)).is_none());
    }

    #[test]
    fn rejects_bad_mesh() {
        assert!(EmbeddingMesh::new(Point::zeros(), Point::new(1.0, 1.0), 0, 2, 1).is_err());
        assert_eq!(
            EmbeddingMesh::new(Point::zeros(), Point::new(1.0, 1.0), 1, 1, 9),
            Err(FemError::UnsupportedDegree(9))
        );
    }
}
