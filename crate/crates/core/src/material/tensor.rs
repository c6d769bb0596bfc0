//! Symmetric 2x2 strain and stress tensors.

use nalgebra::Matrix2;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymTensor2 {
    pub xx: f64,
    pub yy: f64,
    pub xy: f64,
}

impl SymTensor2 {
    pub const ZERO: SymTensor2 = SymTensor2 {
        xx: 0.0,
        yy: 0.0,
        xy: 0.0,
    };

    pub fn new(xx: f64, yy: f64, xy: f64) -> Self {
        Self { xx, yy, xy }
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Self::new(a, b, 0.0)
    }

    pub fn identity() -> Self {
        Self::diag(1.0, 1.0)
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    /// Frobenius inner product `a : b`.
    pub fn dot(&self, other: &SymTensor2) -> f64 {
        self.xx * other.xx + self.yy * other.yy + 2.0 * self.xy * other.xy
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, f: f64) -> Self {
        Self::new(self.xx * f, self.yy * f, self.xy * f)
    }

    pub fn add(&self, other: &SymTensor2) -> Self {
        Self::new(self.xx + other.xx, self.yy + other.yy, self.xy + other.xy)
    }

    pub fn sub(&self, other: &SymTensor2) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Eigenvalues, larger first.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let m = 0.5 * (self.xx + self.yy);
        let r = self.deviator_radius();
        (m + r, m - r)
    }

    fn deviator_radius(&self) -> f64 {
        (0.5 * (self.xx - self.yy)).hypot(self.xy)
    }

    pub fn to_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.xx, self.xy, self.xy, self.yy)
    }
}

/// Symmetric part of a displacement gradient.
pub fn small_strain(grad_u: &Matrix2<f64>) -> SymTensor2 {
    SymTensor2::new(
        grad_u[(0, 0)],
        grad_u[(1, 1)],
        0.5 * (grad_u[(0, 1)] + grad_u[(1, 0)]),
    )
}

/// Positive part `sum <l_a>+ n_a (x) n_a` from the closed-form eigen
/// projections. For repeated eigenvalues the result is `<l>+ I`.
pub fn spectral_positive(eps: &SymTensor2) -> SymTensor2 {
    let r = eps.deviator_radius();
    let m = 0.5 * eps.trace();
    let scale = eps.norm();
    if r <= 1e-14 * scale || r == 0.0 {
        return SymTensor2::identity().scale(m.max(0.0));
    }
    let (l1, l2) = (m + r, m - r);
    // P1 = (eps - l2 I) / (l1 - l2), P2 = I - P1
    let p1 = eps
        .sub(&SymTensor2::identity().scale(l2))
        .scale(1.0 / (2.0 * r));
    let p2 = SymTensor2::identity().sub(&p1);
    p1.scale(l1.max(0.0)).add(&p2.scale(l2.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: &SymTensor2, b: &SymTensor2, tol: f64) -> bool {
        a.sub(b).norm() <= tol
    }

    #[test]
    fn strain_examples() {
        assert_eq!(small_strain(&Matrix2::zeros()), SymTensor2::ZERO);
        assert_eq!(
            small_strain(&Matrix2::new(0.01, 0.0, 0.0, -0.003)),
            SymTensor2::diag(0.01, -0.003)
        );
        assert_eq!(
            small_strain(&Matrix2::new(0.0, 0.2, 0.0, 0.0)),
            SymTensor2::new(0.0, 0.0, 0.1)
        );
    }

    #[test]
    fn positive_part_examples() {
        let e = SymTensor2::diag(0.01, 0.02);
        assert!(close(&spectral_positive(&e), &e, 1e-17));
        assert_eq!(
            spectral_positive(&SymTensor2::diag(-0.01, -0.02)),
            SymTensor2::ZERO
        );
        let shear = spectral_positive(&SymTensor2::new(0.0, 0.0, 0.1));
        assert!(close(&shear, &SymTensor2::new(0.05, 0.05, 0.05), 1e-15));
    }

    #[test]
    fn repeated_eigenvalues() {
        assert_eq!(
            spectral_positive(&SymTensor2::diag(0.3, 0.3)),
            SymTensor2::diag(0.3, 0.3)
        );
        assert_eq!(
            spectral_positive(&SymTensor2::diag(-0.3, -0.3)),
            SymTensor2::ZERO
        );
    }

    fn tensor() -> impl Strategy<Value = SymTensor2> {
        (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b, c)| SymTensor2::new(a, b, c))
    }

    proptest! {
        #[test]
        fn positive_part_is_idempotent(e in tensor()) {
            let p = spectral_positive(&e);
            prop_assert!(close(&spectral_positive(&p), &p, 1e-13));
            let (_, l2) = p.eigenvalues();
            prop_assert!(l2 >= -1e-14);
        }

        #[test]
        fn negative_definite_gives_zero(a in 0.001f64..1.0, b in 0.001f64..1.0, t in 0.0f64..3.2) {
            // rotate diag(-a, -b) by t
            let (c, s) = (t.cos(), t.sin());
            let e = SymTensor2::new(-a * c * c - b * s * s, -a * s * s - b * c * c, (b - a) * c * s);
            prop_assert_eq!(spectral_positive(&e).norm(), 0.0);
        }

        #[test]
        fn split_reassembles(e in tensor()) {
            // eps = eps+ + eps- with eps- the negative spectral part
            let neg = spectral_positive(&e.scale(-1.0)).scale(-1.0);
            prop_assert!(close(&spectral_positive(&e).add(&neg), &e, 1e-14));
        }
    }
}
