//! Symmetric sparse matrices on a fixed element-connectivity pattern and the
//! sparse Cholesky solve behind every field update.

use std::sync::Arc;

use faer::col::ColMut;
use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Llt, Lu, SymbolicLlt, SymbolicLu};
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::Side;

use super::FemError;

/// Compressed-column pattern holding both triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePattern {
    n: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
}

impl SparsePattern {
    /// Pattern with a full dense block for every element dof list.
    pub fn from_elements<'a, I>(n: usize, elements: I) -> Self
    where
        I: IntoIterator<Item = &'a [usize]>,
    {
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); n];
        for dofs in elements {
            for &c in dofs {
                cols[c].extend_from_slice(dofs);
            }
        }
        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut row_idx = Vec::new();
        col_ptr.push(0);
        for mut rows in cols {
            rows.sort_unstable();
            rows.dedup();
            row_idx.extend(rows);
            col_ptr.push(row_idx.len());
        }
        Self {
            n,
            col_ptr,
            row_idx,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    pub fn position(&self, row: usize, col: usize) -> Option<usize> {
        let (start, end) = (self.col_ptr[col], self.col_ptr[col + 1]);
        self.row_idx[start..end]
            .binary_search(&row)
            .ok()
            .map(|k| start + k)
    }

    fn faer_symbolic(&self) -> SymbolicSparseColMatRef<'_, usize> {
        SymbolicSparseColMatRef::new_checked(self.n, self.n, &self.col_ptr, None, &self.row_idx)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    pattern: Arc<SparsePattern>,
    values: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(pattern: Arc<SparsePattern>) -> Self {
        let values = vec![0.0; pattern.nnz()];
        Self { pattern, values }
    }

    pub fn pattern(&self) -> &Arc<SparsePattern> {
        &self.pattern
    }

    pub fn dim(&self) -> usize {
        self.pattern.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pattern
            .position(row, col)
            .map_or(0.0, |k| self.values[k])
    }

    /// Adds `v` at `(row, col)`; the entry must be in the pattern.
    pub fn add(&mut self, row: usize, col: usize, v: f64) {
        let k = self
            .pattern
            .position(row, col)
            .unwrap_or_else(|| panic!("entry ({row}, {col}) outside the sparsity pattern"));
        self.values[k] += v;
    }

    /// Scatters a dense row-major element matrix.
    pub fn add_dense(&mut self, dofs: &[usize], local: &[f64]) {
        let n = dofs.len();
        debug_assert_eq!(local.len(), n * n);
        for (j, &col) in dofs.iter().enumerate() {
            let (start, end) = (self.pattern.col_ptr[col], self.pattern.col_ptr[col + 1]);
            let rows = &self.pattern.row_idx[start..end];
            for (i, &row) in dofs.iter().enumerate() {
                let k = rows
                    .binary_search(&row)
                    .expect("element dof outside pattern");
                self.values[start + k] += local[i * n + j];
            }
        }
    }

    pub fn scale(&mut self, factor: f64) {
        self.values.iter_mut().for_each(|v| *v *= factor);
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        for (col, &xc) in x.iter().enumerate() {
            if xc == 0.0 {
                continue;
            }
            for k in self.pattern.col_ptr[col]..self.pattern.col_ptr[col + 1] {
                y[self.pattern.row_idx[k]] += self.values[k] * xc;
            }
        }
        y
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |K - K^T|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for col in 0..self.dim() {
            for k in self.pattern.col_ptr[col]..self.pattern.col_ptr[col + 1] {
                let row = self.pattern.row_idx[k];
                worst = worst.max((self.values[k] - self.get(col, row)).abs());
            }
        }
        worst
    }

    fn as_faer(&self) -> SparseColMatRef<'_, usize, f64> {
        SparseColMatRef::new(self.pattern.faer_symbolic(), &self.values)
    }
}

/// Which field a system belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Displacement,
    PhaseI,
    PhaseII,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: SymmetricMatrix,
    pub rhs: Vec<f64>,
    pub field: Field,
}

impl LinearSystem {
    /// Relative residual `|K x - b| / |b|`.
    pub fn relative_residual(&self, x: &[f64]) -> f64 {
        let kx = self.matrix.mul_vec(x);
        let r: f64 = kx
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let b = norm(&self.rhs);
        if b > 0.0 {
            r / b
        } else {
            r
        }
    }
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Sparse Cholesky with the symbolic analysis cached per pattern. Falls back
/// to sparse LU if a pivot turns non-positive in floating point.
#[derive(Debug)]
pub struct SparseSolver {
    pattern: Arc<SparsePattern>,
    symbolic: SymbolicLlt<usize>,
    symbolic_lu: Option<SymbolicLu<usize>>,
    /// Target relative residual; iterative refinement runs until it is met
    /// or stops improving.
    pub rtol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub residual: f64,
    pub refinements: usize,
}

impl SparseSolver {
    pub fn new(pattern: Arc<SparsePattern>, rtol: f64) -> Result<Self, FemError> {
        faer::set_global_parallelism(faer::Par::Seq);
        let symbolic = SymbolicLlt::try_new(pattern.faer_symbolic(), Side::Lower)
            .map_err(|e| FemError::Solver(format!("symbolic analysis failed: {e:?}")))?;
        Ok(Self {
            pattern,
            symbolic,
            symbolic_lu: None,
            rtol,
        })
    }

    pub fn solve(&mut self, system: &LinearSystem) -> Result<(Vec<f64>, SolveReport), FemError> {
        if !Arc::ptr_eq(&self.pattern, system.matrix.pattern())
            && *self.pattern != **system.matrix.pattern()
        {
            return Err(FemError::Solver(
                "matrix pattern differs from the analysed one".into(),
            ));
        }
        let a = system.matrix.as_faer();
        match Llt::try_new_with_symbolic(self.symbolic.clone(), a, Side::Lower) {
            Ok(llt) => self.refine(system, |x: &mut [f64]| {
                llt.solve_in_place(ColMut::from_slice_mut(x))
            }),
            Err(err) => {
                log::warn!(
                    "sparse Cholesky failed ({err:?}) for {:?}, retrying with LU",
                    system.field
                );
                if self.symbolic_lu.is_none() {
                    self.symbolic_lu = Some(
                        SymbolicLu::try_new(self.pattern.faer_symbolic())
                            .map_err(|e| FemError::Solver(format!("LU analysis failed: {e:?}")))?,
                    );
                }
                let lu = Lu::try_new_with_symbolic(self.symbolic_lu.clone().unwrap(), a)
                    .map_err(|e| FemError::Solver(format!("LU factorization failed: {e:?}")))?;
                self.refine(system, |x: &mut [f64]| {
                    lu.solve_in_place(ColMut::from_slice_mut(x))
                })
            }
        }
    }

    fn refine(
        &self,
        system: &LinearSystem,
        apply: impl Fn(&mut [f64]),
    ) -> Result<(Vec<f64>, SolveReport), FemError> {
        let mut x = system.rhs.clone();
        apply(&mut x);
        let mut residual = system.relative_residual(&x);
        let mut refinements = 0;
        while residual > self.rtol && refinements < 3 {
            let kx = system.matrix.mul_vec(&x);
            let mut r: Vec<f64> = system.rhs.iter().zip(&kx).map(|(b, k)| b - k).collect();
            apply(&mut r);
            let candidate: Vec<f64> = x.iter().zip(&r).map(|(a, b)| a + b).collect();
            let next = system.relative_residual(&candidate);
            refinements += 1;
            if !(next < residual) {
                break;
            }
            x = candidate;
            residual = next;
        }
        if !residual.is_finite() || x.iter().any(|v| !v.is_finite()) {
            return Err(FemError::Solver(format!(
                "non-finite solution for {:?}",
                system.field
            )));
        }
        Ok((
            x,
            SolveReport {
                residual,
                refinements,
            },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> LinearSystem {
        let elements: Vec<[usize; 2]> = (0..n - 1).map(|i| [i, i + 1]).collect();
        let pattern = Arc::new(SparsePattern::from_elements(
            n,
            elements.iter().map(|e| &e[..]),
        ));
        let mut m = SymmetricMatrix::zeros(pattern);
        for e in &elements {
            m.add_dense(e, &[1.0, -1.0, -1.0, 1.0]);
        }
        m.add(0, 0, 1.0);
        LinearSystem {
            matrix: m,
            rhs: vec![1.0; n],
            field: Field::PhaseI,
        }
    }

    #[test]
    fn pattern_lookup() {
        let sys = laplacian_1d(5);
        let p = sys.matrix.pattern();
        assert_eq!(p.nnz(), 13);
        assert!(p.position(0, 2).is_none());
        assert_eq!(sys.matrix.get(2, 2), 2.0);
        assert_eq!(sys.matrix.get(1, 2), -1.0);
        assert_eq!(sys.matrix.max_asymmetry(), 0.0);
    }

    #[test]
    fn cholesky_solves_chain() {
        let sys = laplacian_1d(50);
        let mut solver = SparseSolver::new(sys.matrix.pattern().clone(), 1e-12).unwrap();
        let (x, report) = solver.solve(&sys).unwrap();
        assert!(report.residual < 1e-12);
        // u(0) = sum of loads, u(i) = u(i-1) + loads to the right
        let mut expected = vec![50.0];
        for i in 1..50 {
            expected.push(expected[i - 1] + (50 - i) as f64);
        }
        for (a, b) in x.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-9 * b);
        }
    }

    #[test]
    fn indefinite_matrix_falls_back_to_lu() {
        let mut sys = laplacian_1d(4);
        sys.matrix.add(3, 3, -5.0);
        let mut solver = SparseSolver::new(sys.matrix.pattern().clone(), 1e-12).unwrap();
        let (x, report) = solver.solve(&sys).unwrap();
        assert!(report.residual < 1e-12, "{report:?}");
        assert_eq!(x.len(), 4);
    }
}
