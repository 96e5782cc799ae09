//! Hermitian eigendecomposition with a reproducible phase convention.
//!
//! Eigenvalues are returned in ascending order. Each eigenvector is rotated by
//! a global phase so that its largest-magnitude component is real and
//! positive; when several components share the largest magnitude (within
//! `1e-12`), the lowest index wins. Within an exactly degenerate block the
//! basis is whatever the underlying QR iteration produced, which is a pure
//! function of the input matrix.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ensure_hermitian, hermitize, CMatrix, HERMITIAN_TOL};

/// Sweep cap handed to the QR iteration.
pub const MAX_EIGEN_ITERATIONS: usize = 10_000;

const PHASE_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, aligned with `values`.
    pub vectors: CMatrix,
}

impl Eigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Column `j` as an owned vector.
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.vectors.column(j).iter().copied().collect()
    }

    /// `Σ_j λ_j |v_j⟩⟨v_j|`.
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.dim();
        let mut scaled = self.vectors.clone();
        for j in 0..d {
            let lambda = self.values[j];
            scaled.column_mut(j).scale_mut(lambda);
        }
        scaled * self.vectors.adjoint()
    }
}

pub fn eigendecompose_hermitian(m: &CMatrix) -> Result<Eigen> {
    ensure_hermitian(m, HERMITIAN_TOL)?;
    let sym = hermitize(m);
    let d = sym.nrows();
    if d == 0 {
        return Ok(Eigen {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let decomposition = SymmetricEigen::try_new(sym, f64::EPSILON, MAX_EIGEN_ITERATIONS)
        .ok_or(Error::ConvergenceFailure(MAX_EIGEN_ITERATIONS))?;

    let mut order: Vec<usize> = (0..d).collect();
    // Stable sort keeps the solver's order inside exact ties.
    order.sort_by(|&a, &b| {
        decomposition.eigenvalues[a]
            .partial_cmp(&decomposition.eigenvalues[b])
            .expect("eigenvalues are finite")
    });

    let mut vectors = CMatrix::zeros(d, d);
    let mut values = Vec::with_capacity(d);
    for (slot, &src) in order.iter().enumerate() {
        values.push(decomposition.eigenvalues[src]);
        let col = decomposition.eigenvectors.column(src);
        let max_mag = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let pivot = col
            .iter()
            .position(|z| z.norm() >= max_mag - PHASE_TIE_TOL)
            .expect("non-empty column");
        let anchor = col[pivot];
        let phase = anchor.conj() / anchor.norm();
        for i in 0..d {
            vectors[(i, slot)] = col[i] * phase;
        }
        vectors[(pivot, slot)] = Complex64::new(vectors[(pivot, slot)].norm(), 0.0);
    }
    Ok(Eigen { values, vectors })
}
