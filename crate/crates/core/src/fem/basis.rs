//! Hierarchic integrated-Legendre shape functions.
//!
//! 1D: the two linear hats plus `p - 1` bubbles
//! `phi_k = (P_k - P_{k-2}) / sqrt(2(2k - 1))`, `k = 2..=p`, which vanish at
//! both ends. The 2D basis is the full tensor product; local index
//! `j * (p + 1) + i` pairs 1D function `i` in xi with `j` in eta.

use super::FemError;
use crate::quadrature::legendre;

pub const MAX_DEGREE: usize = 4;

/// Values and derivatives of the `p + 1` 1D functions at `xi`.
pub fn shape_basis(p: usize, xi: f64) -> Result<(Vec<f64>, Vec<f64>), FemError> {
    if !(1..=MAX_DEGREE).contains(&p) {
        return Err(FemError::UnsupportedDegree(p));
    }
    let mut values = Vec::with_capacity(p + 1);
    let mut derivs = Vec::with_capacity(p + 1);
    values.push(0.5 * (1.0 - xi));
    values.push(0.5 * (1.0 + xi));
    derivs.push(-0.5);
    derivs.push(0.5);
    for k in 2..=p {
        let (pk, _) = legendre(k, xi);
        let (pk2, _) = legendre(k - 2, xi);
        let (pk1, _) = legendre(k - 1, xi);
        let kf = k as f64;
        values.push((pk - pk2) / (2.0 * (2.0 * kf - 1.0)).sqrt());
        // (P_k - P_{k-2})' = (2k - 1) P_{k-1}
        derivs.push((2.0 * kf - 1.0) * pk1 / (2.0 * (2.0 * kf - 1.0)).sqrt());
    }
    Ok((values, derivs))
}

/// Tensor-product values and reference gradients at `(xi, eta)`.
pub fn tensor_basis(p: usize, xi: f64, eta: f64) -> Result<TensorBasis, FemError> {
    let (vx, dx) = shape_basis(p, xi)?;
    let (vy, dy) = shape_basis(p, eta)?;
    let n = (p + 1) * (p + 1);
    let mut out = TensorBasis {
        values: Vec::with_capacity(n),
        d_xi: Vec::with_capacity(n),
        d_eta: Vec::with_capacity(n),
    };
    for j in 0..=p {
        for i in 0..=p {
            out.values.push(vx[i] * vy[j]);
            out.d_xi.push(dx[i] * vy[j]);
            out.d_eta.push(vx[i] * dy[j]);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensorBasis {
    pub values: Vec<f64>,
    pub d_xi: Vec<f64>,
    pub d_eta: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_midpoint() {
        let (v, d) = shape_basis(1, 0.0).unwrap();
        assert_eq!(v, vec![0.5, 0.5]);
        assert_eq!(d, vec![-0.5, 0.5]);
    }

    #[test]
    fn bubbles_vanish_at_vertices() {
        for p in 2..=MAX_DEGREE {
            for xi in [-1.0, 1.0] {
                let (v, _) = shape_basis(p, xi).unwrap();
                for b in &v[2..] {
                    assert!(b.abs() < 1e-15, "p = {p}, xi = {xi}, value {b}");
                }
            }
        }
    }

    #[test]
    fn rejects_unsupported_degree() {
        assert_eq!(shape_basis(0, 0.0), Err(FemError::UnsupportedDegree(0)));
        assert_eq!(shape_basis(5, 0.0), Err(FemError::UnsupportedDegree(5)));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        for p in 1..=MAX_DEGREE {
            for &xi in &[-0.9, -0.3, 0.1, 0.77] {
                let (_, d) = shape_basis(p, xi).unwrap();
                let (vp, _) = shape_basis(p, xi + h).unwrap();
                let (vm, _) = shape_basis(p, xi - h).unwrap();
                for k in 0..=p {
                    let fd = (vp[k] - vm[k]) / (2.0 * h);
                    assert!((fd - d[k]).abs() < 1e-8, "p {p} k {k}: {fd} vs {}", d[k]);
                }
            }
        }
    }

    #[test]
    fn tensor_basis_sizes() {
        let b = tensor_basis(3, 0.2, -0.4).unwrap();
        assert_eq!(b.values.len(), 16);
        let vertex_sum: f64 = [0, 1, 4, 5].iter().map(|&i| b.values[i]).sum();
        assert!((vertex_sum - 1.0).abs() < 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn linear_part_partitions_unity(p in 1usize..=4, xi in -1.0f64..=1.0) {
            let (v, _) = shape_basis(p, xi).unwrap();
            proptest::prop_assert!((v[0] + v[1] - 1.0).abs() < 1e-15);
        }
    }
}
