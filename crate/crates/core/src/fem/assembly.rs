//! Element loops for the displacement and phase-field systems.

use nalgebra::Vector2;

use super::boundary::{BoundaryPoint, PenaltyBoundary};
use super::discretization::Discretization;
use super::sparse::{Field, LinearSystem, SymmetricMatrix};
use super::tensor_basis;
use super::FemError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum PhaseMode {
    I,
    II,
}

impl PhaseMode {
    pub fn field(self) -> Field {
        match self {
            PhaseMode::I => Field::PhaseI,
            PhaseMode::II => Field::PhaseII,
        }
    }
}

/// Plane-strain stiffness `int alpha g B^T C B` plus the penalty terms of
/// every Dirichlet curve. `g` holds one degradation value per volume
/// quadrature point.
pub fn assemble_elastic(
    disc: &Discretization,
    g: &[f64],
    lambda: f64,
    mu: f64,
    body_force: Vector2<f64>,
    boundaries: &[PenaltyBoundary],
) -> Result<LinearSystem, FemError> {
    if g.len() != disc.n_points() {
        return Err(FemError::MissingDegradation {
            expected: disc.n_points(),
            got: g.len(),
        });
    }
    let nb = disc.n_basis();
    let mut matrix = SymmetricMatrix::zeros(disc.vector_pattern.clone());
    let mut rhs = vec![0.0; disc.dofs.n_vector()];
    // per element: sums of w gx_i gx_j, w gx_i gy_j, w gy_i gy_j
    let mut sxx = vec![0.0; nb * nb];
    let mut sxy = vec![0.0; nb * nb];
    let mut syy = vec![0.0; nb * nb];
    let mut local = vec![0.0; 4 * nb * nb];
    let has_body = body_force != Vector2::zeros();
    for e in 0..disc.mesh.n_elements() {
        sxx.iter_mut()
            .chain(sxy.iter_mut())
            .chain(syy.iter_mut())
            .for_each(|v| *v = 0.0);
        let dofs = disc.dofs.element_vector(e);
        for q in disc.element_points(e) {
            let qp = &disc.points[q];
            let w = qp.weight * qp.alpha * g[q];
            let (n, gx, gy) = disc.basis(q);
            for i in 0..nb {
                let (wx, wy) = (w * gx[i], w * gy[i]);
                let row = i * nb;
                for j in 0..nb {
                    sxx[row + j] += wx * gx[j];
                    sxy[row + j] += wx * gy[j];
                    syy[row + j] += wy * gy[j];
                }
            }
            if has_body {
                let wb = qp.weight * qp.alpha;
                for i in 0..nb {
                    rhs[dofs[2 * i]] += wb * body_force.x * n[i];
                    rhs[dofs[2 * i + 1]] += wb * body_force.y * n[i];
                }
            }
        }
        let m = 2 * nb;
        let l2m = lambda + 2.0 * mu;
        for i in 0..nb {
            for j in 0..nb {
                let (xx, xy, yx, yy) = (
                    sxx[i * nb + j],
                    sxy[i * nb + j],
                    sxy[j * nb + i],
                    syy[i * nb + j],
                );
                local[(2 * i) * m + 2 * j] = l2m * xx + mu * yy;
                local[(2 * i) * m + 2 * j + 1] = lambda * xy + mu * yx;
                local[(2 * i + 1) * m + 2 * j] = lambda * yx + mu * xy;
                local[(2 * i + 1) * m + 2 * j + 1] = l2m * yy + mu * xx;
            }
        }
        matrix.add_dense(&dofs, &local);
    }
    for b in boundaries {
        add_penalty(disc, b, &mut matrix, &mut rhs);
    }
    Ok(LinearSystem {
        matrix,
        rhs,
        field: Field::Displacement,
    })
}

fn add_penalty(
    disc: &Discretization,
    b: &PenaltyBoundary,
    matrix: &mut SymmetricMatrix,
    rhs: &mut [f64],
) {
    let nb = disc.n_basis();
    let beta = b.arc.penalty;
    let mut local = vec![0.0; 4 * nb * nb];
    for p in &b.points {
        let basis = tensor_basis(disc.mesh.degree, p.xi[0], p.xi[1])
            .expect("degree validated at construction");
        let dofs = disc.dofs.element_vector(p.element);
        local.iter_mut().for_each(|v| *v = 0.0);
        let m = 2 * nb;
        let value = b.arc.value_at(p.t);
        for c in 0..2 {
            if !b.arc.constrain[c] {
                continue;
            }
            for i in 0..nb {
                let wi = beta * p.weight * basis.values[i];
                rhs[dofs[2 * i + c]] += wi * value[c];
                for j in 0..nb {
                    local[(2 * i + c) * m + 2 * j + c] = wi * basis.values[j];
                }
            }
        }
        matrix.add_dense(&dofs, &local);
    }
}

/// Phase-field system for one crack mode:
/// `int alpha {[4 l0 (1 - eta) H / Gc + 1] N N + 4 l0^2 grad N . grad N}`
/// with the unit source integrated over the physical domain only.
pub fn assemble_phase(
    mode: PhaseMode,
    disc: &Discretization,
    history: &[f64],
    l0: f64,
    gc: f64,
    eta: f64,
) -> Result<LinearSystem, FemError> {
    if !(gc > 0.0) || !(l0 > 0.0) {
        return Err(FemError::InvalidInput(format!(
            "fracture energy and length scale must be positive, got Gc = {gc}, l0 = {l0}"
        )));
    }
    if history.len() != disc.n_points() {
        return Err(FemError::InvalidInput(format!(
            "history field has {} values, expected {}",
            history.len(),
            disc.n_points()
        )));
    }
    if let Some(h) = history.iter().find(|h| !(**h >= 0.0)) {
        return Err(FemError::InvalidInput(format!(
            "history values must be non-negative, found {h}"
        )));
    }
    let nb = disc.n_basis();
    let diffusion = 4.0 * l0 * l0;
    let reaction_scale = 4.0 * l0 * (1.0 - eta) / gc;
    let mut matrix = SymmetricMatrix::zeros(disc.scalar_pattern.clone());
    let mut rhs = vec![0.0; disc.dofs.n_scalar()];
    let mut local = vec![0.0; nb * nb];
    for e in 0..disc.mesh.n_elements() {
        local.iter_mut().for_each(|v| *v = 0.0);
        let dofs = disc.dofs.element(e);
        for q in disc.element_points(e) {
            let qp = &disc.points[q];
            let w = qp.weight * qp.alpha;
            let react = w * (reaction_scale * history[q] + 1.0);
            let diff = w * diffusion;
            let (n, gx, gy) = disc.basis(q);
            for i in 0..nb {
                let row = i * nb;
                let (ri, dxi, dyi) = (react * n[i], diff * gx[i], diff * gy[i]);
                for j in 0..nb {
                    local[row + j] += ri * n[j] + dxi * gx[j] + dyi * gy[j];
                }
                if qp.is_physical() {
                    rhs[dofs[i]] += qp.weight * n[i];
                }
            }
        }
        matrix.add_dense(dofs, &local);
    }
    Ok(LinearSystem {
        matrix,
        rhs,
        field: mode.field(),
    })
}

/// Adds `coefficient * int N_i N_j ds` over boundary points to a scalar
/// system; a large coefficient pins the field to zero along the curve.
pub fn add_boundary_mass(
    system: &mut LinearSystem,
    disc: &Discretization,
    points: &[BoundaryPoint],
    coefficient: f64,
) {
    let nb = disc.n_basis();
    let mut local = vec![0.0; nb * nb];
    for p in points {
        let basis = tensor_basis(disc.mesh.degree, p.xi[0], p.xi[1])
            .expect("degree validated at construction");
        for i in 0..nb {
            for j in 0..nb {
                local[i * nb + j] = coefficient * p.weight * basis.values[i] * basis.values[j];
            }
        }
        system
            .matrix
            .add_dense(disc.dofs.element(p.element), &local);
    }
}

/// Penalty-consistent reaction `beta int (g - u) . n ds` summed over the
/// constrained components of each curve, in force per unit thickness.
pub fn reaction_force(
    disc: &Discretization,
    u: &[f64],
    boundaries: &[PenaltyBoundary],
    direction: Vector2<f64>,
) -> f64 {
    let mut force = 0.0;
    for b in boundaries {
        for p in &b.points {
            let (uh, _) = disc.vector_at_reference(u, p.element, p.xi);
            let value = b.arc.value_at(p.t);
            for c in 0..2 {
                if b.arc.constrain[c] {
                    force += b.arc.penalty * p.weight * (value[c] - uh[c]) * direction[c];
                }
            }
        }
    }
    force
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{BoundaryPath, DirichletArc, EmbeddingMesh, SparseSolver};
    use crate::geometry::{ImplicitShape, Point};
    use nalgebra::{DMatrix, Matrix2};

    fn square(n: usize, p: usize) -> Discretization {
        let mesh = EmbeddingMesh::new(Point::zeros(), Point::new(2.0, 2.0), n, n, p).unwrap();
        let shape = ImplicitShape::rectangle(Point::zeros(), Point::new(2.0, 2.0));
        Discretization::new(mesh, &shape, 0, p + 1, 1e-8).unwrap()
    }

    fn dense(m: &SymmetricMatrix) -> DMatrix<f64> {
        DMatrix::from_fn(m.dim(), m.dim(), |i, j| m.get(i, j))
    }

    fn sides(
        value: impl Fn(Point) -> [f64; 2],
        beta: f64,
        disc: &Discretization,
    ) -> Vec<PenaltyBoundary> {
        let corners = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
        (0..4)
            .map(|k| {
                let (a, b) = (corners[k], corners[(k + 1) % 4]);
                let arc = DirichletArc {
                    path: BoundaryPath::Segment { start: a, end: b },
                    constrain: [true, true],
                    value: value(Point::new(a[0], a[1])),
                    value_end: Some(value(Point::new(b[0], b[1]))),
                    penalty: beta,
                };
                PenaltyBoundary::new(arc, &disc.mesh).unwrap()
            })
            .collect()
    }

    #[test]
    fn single_element_has_three_rigid_modes() {
        let disc = square(1, 2);
        let g = vec![1.0; disc.n_points()];
        let sys = assemble_elastic(&disc, &g, 20.0, 15.0, Vector2::zeros(), &[]).unwrap();
        assert!(sys.matrix.max_asymmetry() <= 1e-12 * sys.matrix.max_abs());
        let eig = dense(&sys.matrix).symmetric_eigenvalues();
        let scale = eig.max();
        let zeros = eig.iter().filter(|v| v.abs() < 1e-10 * scale).count();
        assert_eq!(zeros, 3);
        assert!(eig.iter().all(|v| *v > -1e-10 * scale));
    }

    #[test]
    fn stiffness_scales_with_degradation() {
        let disc = square(2, 3);
        let ones = vec![1.0; disc.n_points()];
        let eta = vec![1e-6; disc.n_points()];
        let a = assemble_elastic(&disc, &ones, 20.0, 15.0, Vector2::zeros(), &[]).unwrap();
        let b = assemble_elastic(&disc, &eta, 20.0, 15.0, Vector2::zeros(), &[]).unwrap();
        for (x, y) in a.matrix.values().iter().zip(b.matrix.values()) {
            assert!((x * 1e-6 - y).abs() <= 1e-12 * a.matrix.max_abs() * 1e-6);
        }
    }

    #[test]
    fn missing_degradation_is_rejected() {
        let disc = square(1, 1);
        let err = assemble_elastic(&disc, &[1.0], 1.0, 1.0, Vector2::zeros(), &[]).unwrap_err();
        assert!(matches!(err, FemError::MissingDegradation { .. }));
    }

    #[test]
    fn uniaxial_stretch_recovers_plane_strain_stress() {
        let (e_mod, nu) = (45.8, 0.31);
        let lambda = e_mod * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        let mu = e_mod / (2.0 * (1.0 + nu));
        let strain = 1e-3;
        let disc = square(2, 2);
        let arcs = sides(|x| [strain * x.x, 0.0], 1e6, &disc);
        let sys = assemble_elastic(
            &disc,
            &vec![1.0; disc.n_points()],
            lambda,
            mu,
            Vector2::zeros(),
            &arcs,
        )
        .unwrap();
        let mut solver = SparseSolver::new(disc.vector_pattern.clone(), 1e-10).unwrap();
        let (u, _) = solver.solve(&sys).unwrap();
        let expected = (lambda + 2.0 * mu) * strain;
        for q in 0..disc.n_points() {
            let grad = disc.vector_gradient_at(&u, q);
            let sxx = (lambda + 2.0 * mu) * grad[(0, 0)] + lambda * grad[(1, 1)];
            assert!(
                (sxx - expected).abs() < 1e-3 * expected,
                "{sxx} vs {expected}"
            );
        }
    }

    #[test]
    fn patch_test_reproduces_linear_field() {
        for p in 1..=4 {
            let disc = square(2, p);
            let grad = Matrix2::new(1e-3, -4e-4, 2e-4, 5e-4);
            let arcs = sides(|x| (grad * x).into(), 1e8, &disc);
            let sys = assemble_elastic(
                &disc,
                &vec![1.0; disc.n_points()],
                10.0,
                8.0,
                Vector2::zeros(),
                &arcs,
            )
            .unwrap();
            let mut solver = SparseSolver::new(disc.vector_pattern.clone(), 1e-12).unwrap();
            let (u, _) = solver.solve(&sys).unwrap();
            for q in 0..disc.n_points() {
                let err = (disc.vector_gradient_at(&u, q) - grad).norm() / grad.norm();
                // penalty consistency error is O(stiffness / beta)
                assert!(err < 1e-5, "p = {p}: {err}");
            }
        }
    }

    #[test]
    fn phase_with_zero_history_is_intact() {
        let disc = square(3, 3);
        let h = vec![0.0; disc.n_points()];
        for l0 in [0.5, 1.0] {
            let sys = assemble_phase(PhaseMode::I, &disc, &h, l0, 1e-4, 1e-6).unwrap();
            let mut solver = SparseSolver::new(disc.scalar_pattern.clone(), 1e-12).unwrap();
            let (s, _) = solver.solve(&sys).unwrap();
            for q in 0..disc.n_points() {
                assert!((disc.scalar_at(&s, q) - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn uniform_history_gives_closed_form() {
        let disc = square(2, 2);
        let (l0, gc, eta, h0) = (0.4, 2e-4, 1e-6, 3e-4);
        let sys = assemble_phase(
            PhaseMode::II,
            &disc,
            &vec![h0; disc.n_points()],
            l0,
            gc,
            eta,
        )
        .unwrap();
        assert_eq!(sys.field, Field::PhaseII);
        let mut solver = SparseSolver::new(disc.scalar_pattern.clone(), 1e-12).unwrap();
        let (s, _) = solver.solve(&sys).unwrap();
        let expected = 1.0 / (4.0 * l0 * (1.0 - eta) * h0 / gc + 1.0);
        for q in 0..disc.n_points() {
            assert!((disc.scalar_at(&s, q) - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn phase_rejects_bad_parameters() {
        let disc = square(1, 1);
        let h = vec![0.0; disc.n_points()];
        assert!(assemble_phase(PhaseMode::I, &disc, &h, 0.0, 1.0, 0.0).is_err());
        assert!(assemble_phase(PhaseMode::I, &disc, &h, 1.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn rigid_limit_reaction() {
        let mesh = EmbeddingMesh::new(
            Point::new(-50.0, -50.0),
            Point::new(100.0, 100.0),
            10,
            10,
            2,
        )
        .unwrap();
        let disc =
            Discretization::new(mesh, &ImplicitShape::disk(Point::zeros(), 47.0), 1, 3, 1e-8)
                .unwrap();
        let delta = 1e-3;
        let arc = DirichletArc {
            path: BoundaryPath::Arc {
                center: [0.0, 0.0],
                radius: 47.0,
                mid_angle_deg: 90.0,
                length: 10.0,
            },
            constrain: [false, true],
            value: [0.0, -delta],
            value_end: None,
            penalty: 1e6,
        };
        let b = vec![PenaltyBoundary::new(arc, &disc.mesh).unwrap()];
        let u = vec![0.0; disc.dofs.n_vector()];
        let f = reaction_force(&disc, &u, &b, Vector2::new(0.0, -1.0));
        assert!((f - 1e6 * delta * 10.0).abs() < 1e-9 * f);
        let mut zero = b.clone();
        zero[0].arc.value = [0.0, 0.0];
        assert_eq!(
            reaction_force(&disc, &u, &zero, Vector2::new(0.0, -1.0)),
            0.0
        );
    }
}
