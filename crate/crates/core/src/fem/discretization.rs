//! Mesh, dof numbering, sparsity patterns and the flattened volume
//! quadrature with cached basis data.

use std::ops::Range;
use std::sync::Arc;

use nalgebra::{Matrix2, Vector2};

use super::basis::tensor_basis;
use super::mesh::{DofMap, EmbeddingMesh};
use super::sparse::SparsePattern;
use super::FemError;
use crate::geometry::{partition_element, CellClass, ImplicitShape, IntegrationCell, Point};

/// One volume quadrature point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPoint {
    pub element: usize,
    pub xi: [f64; 2],
    pub position: Point,
    /// Physical weight (reference weight times Jacobian), mm^2.
    pub weight: f64,
    /// Indicator value, 1 or the fictitious value.
    pub alpha: f64,
}

impl QuadPoint {
    pub fn is_physical(&self) -> bool {
        self.alpha == 1.0
    }
}

#[derive(Debug, Clone)]
pub struct Discretization {
    pub mesh: EmbeddingMesh,
    pub dofs: DofMap,
    pub scalar_pattern: Arc<SparsePattern>,
    pub vector_pattern: Arc<SparsePattern>,
    pub points: Vec<QuadPoint>,
    offsets: Vec<usize>,
    n_basis: usize,
    values: Vec<f64>,
    grad_x: Vec<f64>,
    grad_y: Vec<f64>,
    cut_elements: usize,
}

impl Discretization {
    /// Partitions every element against `shape` and caches the basis at each
    /// leaf quadrature point.
    pub fn new(
        mesh: EmbeddingMesh,
        shape: &ImplicitShape,
        depth: usize,
        order: usize,
        alpha_fict: f64,
    ) -> Result<Self, FemError> {
        if !(alpha_fict > 0.0) {
            return Err(FemError::InvalidInput(format!(
                "fictitious indicator must be positive, got {alpha_fict}"
            )));
        }
        let cells: Vec<Vec<IntegrationCell>> = (0..mesh.n_elements())
            .map(|e| partition_element(&mesh.element_bounds(e), shape, depth, order, alpha_fict))
            .collect();
        Self::from_cells(mesh, &cells)
    }

    /// Builds from explicit per-element leaf lists.
    pub fn from_cells(
        mesh: EmbeddingMesh,
        cells: &[Vec<IntegrationCell>],
    ) -> Result<Self, FemError> {
        if cells.len() != mesh.n_elements() {
            return Err(FemError::InvalidInput(format!(
                "expected cells for {} elements, got {}",
                mesh.n_elements(),
                cells.len()
            )));
        }
        let dofs = DofMap::new(&mesh);
        let n_basis = dofs.per_element();
        let scalar_pattern = Arc::new(SparsePattern::from_elements(
            dofs.n_scalar(),
            (0..mesh.n_elements()).map(|e| dofs.element(e)),
        ));
        let vector_lists: Vec<Vec<usize>> = (0..mesh.n_elements())
            .map(|e| dofs.element_vector(e))
            .collect();
        let vector_pattern = Arc::new(SparsePattern::from_elements(
            dofs.n_vector(),
            vector_lists.iter().map(Vec::as_slice),
        ));

        let jac = mesh.jacobian();
        let (sx, sy) = (2.0 / mesh.hx, 2.0 / mesh.hy);
        let mut points = Vec::new();
        let mut offsets = vec![0];
        let (mut values, mut grad_x, mut grad_y) = (Vec::new(), Vec::new(), Vec::new());
        let mut cut_elements = 0;
        for (e, leaves) in cells.iter().enumerate() {
            if leaves.iter().any(|c| c.class == CellClass::Cut) || leaves.len() > 1 {
                cut_elements += 1;
            }
            for leaf in leaves {
                for p in &leaf.points {
                    let b = tensor_basis(mesh.degree, p.xi[0], p.xi[1])?;
                    values.extend_from_slice(&b.values);
                    grad_x.extend(b.d_xi.iter().map(|d| d * sx));
                    grad_y.extend(b.d_eta.iter().map(|d| d * sy));
                    points.push(QuadPoint {
                        element: e,
                        xi: p.xi,
                        position: mesh.to_physical(e, p.xi),
                        weight: p.weight * jac,
                        alpha: p.alpha,
                    });
                }
            }
            offsets.push(points.len());
        }
        Ok(Self {
            mesh,
            dofs,
            scalar_pattern,
            vector_pattern,
            points,
            offsets,
            n_basis,
            values,
            grad_x,
            grad_y,
            cut_elements,
        })
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn n_basis(&self) -> usize {
        self.n_basis
    }

    /// Number of elements that needed subdivision.
    pub fn cut_elements(&self) -> usize {
        self.cut_elements
    }

    pub fn element_points(&self, e: usize) -> Range<usize> {
        self.offsets[e]..self.offsets[e + 1]
    }

    /// Basis values and physical gradients at quadrature point `q`.
    pub fn basis(&self, q: usize) -> (&[f64], &[f64], &[f64]) {
        let r = q * self.n_basis..(q + 1) * self.n_basis;
        (
            &self.values[r.clone()],
            &self.grad_x[r.clone()],
            &self.grad_y[r],
        )
    }

    pub fn scalar_at(&self, coeffs: &[f64], q: usize) -> f64 {
        let (n, _, _) = self.basis(q);
        let dofs = self.dofs.element(self.points[q].element);
        n.iter().zip(dofs).map(|(v, &d)| v * coeffs[d]).sum()
    }

    /// Scalar value and physical gradient at quadrature point `q`.
    pub fn scalar_gradient_at(&self, coeffs: &[f64], q: usize) -> (f64, Vector2<f64>) {
        let (n, gx, gy) = self.basis(q);
        let dofs = self.dofs.element(self.points[q].element);
        let mut v = 0.0;
        let mut g = Vector2::zeros();
        for k in 0..self.n_basis {
            let c = coeffs[dofs[k]];
            v += n[k] * c;
            g.x += gx[k] * c;
            g.y += gy[k] * c;
        }
        (v, g)
    }

    pub fn vector_at(&self, coeffs: &[f64], q: usize) -> Vector2<f64> {
        let (n, _, _) = self.basis(q);
        let dofs = self.dofs.element(self.points[q].element);
        let mut u = Vector2::zeros();
        for (v, &d) in n.iter().zip(dofs) {
            u.x += v * coeffs[2 * d];
            u.y += v * coeffs[2 * d + 1];
        }
        u
    }

    /// Displacement gradient `du_i/dx_j` at quadrature point `q`.
    pub fn vector_gradient_at(&self, coeffs: &[f64], q: usize) -> Matrix2<f64> {
        let (_, gx, gy) = self.basis(q);
        let dofs = self.dofs.element(self.points[q].element);
        let mut g = Matrix2::zeros();
        for ((dx, dy), &d) in gx.iter().zip(gy).zip(dofs) {
            let (ux, uy) = (coeffs[2 * d], coeffs[2 * d + 1]);
            g[(0, 0)] += ux * dx;
            g[(0, 1)] += ux * dy;
            g[(1, 0)] += uy * dx;
            g[(1, 1)] += uy * dy;
        }
        g
    }

    /// Scalar field value and gradient at an arbitrary point of element `e`.
    pub fn scalar_at_reference(
        &self,
        coeffs: &[f64],
        e: usize,
        xi: [f64; 2],
    ) -> (f64, Vector2<f64>) {
        let b =
            tensor_basis(self.mesh.degree, xi[0], xi[1]).expect("degree validated at construction");
        let dofs = self.dofs.element(e);
        let (sx, sy) = (2.0 / self.mesh.hx, 2.0 / self.mesh.hy);
        let mut v = 0.0;
        let mut g = Vector2::zeros();
        for k in 0..self.n_basis {
            let c = coeffs[dofs[k]];
            v += b.values[k] * c;
            g.x += b.d_xi[k] * sx * c;
            g.y += b.d_eta[k] * sy * c;
        }
        (v, g)
    }

    /// Vector field value and gradient at an arbitrary point of element `e`.
    pub fn vector_at_reference(
        &self,
        coeffs: &[f64],
        e: usize,
        xi: [f64; 2],
    ) -> (Vector2<f64>, Matrix2<f64>) {
        let b =
            tensor_basis(self.mesh.degree, xi[0], xi[1]).expect("degree validated at construction");
        let dofs = self.dofs.element(e);
        let (sx, sy) = (2.0 / self.mesh.hx, 2.0 / self.mesh.hy);
        let mut u = Vector2::zeros();
        let mut g = Matrix2::zeros();
        for k in 0..self.n_basis {
            let (ux, uy) = (coeffs[2 * dofs[k]], coeffs[2 * dofs[k] + 1]);
            let (dx, dy) = (b.d_xi[k] * sx, b.d_eta[k] * sy);
            u.x += b.values[k] * ux;
            u.y += b.values[k] * uy;
            g[(0, 0)] += ux * dx;
            g[(0, 1)] += ux * dy;
            g[(1, 0)] += uy * dx;
            g[(1, 1)] += uy * dy;
        }
        (u, g)
    }

    /// Coefficients of the scalar field that is identically `value`:
    /// vertex hats carry the value, bubbles are zero.
    pub fn constant_scalar(&self, value: f64) -> Vec<f64> {
        let mut c = vec![0.0; self.dofs.n_scalar()];
        let n_vertices = (self.mesh.nx + 1) * (self.mesh.ny + 1);
        c[..n_vertices].iter_mut().for_each(|v| *v = value);
        c
    }

    /// Coefficients of the displacement field `u(x) = a + B x`, exactly
    /// representable by the vertex hats.
    pub fn linear_vector(&self, offset: Vector2<f64>, gradient: Matrix2<f64>) -> Vec<f64> {
        let mut c = vec![0.0; self.dofs.n_vector()];
        for iy in 0..=self.mesh.ny {
            for ix in 0..=self.mesh.nx {
                let x = self.mesh.origin
                    + Point::new(ix as f64 * self.mesh.hx, iy as f64 * self.mesh.hy);
                let u = offset + gradient * x;
                let d = self.dofs.vertex(&self.mesh, ix, iy);
                c[2 * d] = u.x;
                c[2 * d + 1] = u.y;
            }
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_integrates_box_area() {
        let mesh =
            EmbeddingMesh::new(Point::new(-1.0, -1.0), Point::new(4.0, 2.0), 4, 2, 2).unwrap();
        let shape = ImplicitShape::rectangle(Point::new(-1.0, -1.0), Point::new(3.0, 1.0));
        let d = Discretization::new(mesh, &shape, 2, 3, 1e-8).unwrap();
        let area: f64 = d.points.iter().map(|p| p.weight).sum();
        assert!((area - 8.0).abs() < 1e-12);
        assert_eq!(d.cut_elements(), 0);
        assert!(d.points.iter().all(QuadPoint::is_physical));
    }

    #[test]
    fn linear_field_gradient_is_exact() {
        let mesh = EmbeddingMesh::new(Point::zeros(), Point::new(2.0, 2.0), 2, 2, 3).unwrap();
        let shape = ImplicitShape::rectangle(Point::zeros(), Point::new(2.0, 2.0));
        let d = Discretization::new(mesh, &shape, 0, 4, 1e-8).unwrap();
        let grad = Matrix2::new(0.1, -0.2, 0.3, 0.05);
        let u = d.linear_vector(Vector2::new(1.0, 2.0), grad);
        for q in 0..d.n_points() {
            assert!((d.vector_gradient_at(&u, q) - grad).norm() < 1e-14);
            let x = d.points[q].position;
            assert!((d.vector_at(&u, q) - (Vector2::new(1.0, 2.0) + grad * x)).norm() < 1e-14);
        }
        let s = d.constant_scalar(0.7);
        assert!((d.scalar_at(&s, 5) - 0.7).abs() < 1e-15);
    }
}
