//! Hamiltonians, density matrices and the reference states used as ground truth.

mod eigen;
mod spin_chain;
mod states;

pub use eigen::{eigendecompose_hermitian, Eigen, MAX_EIGEN_ITERATIONS};
pub use spin_chain::{build_spin_chain, ModelPreset, SpinChainParams};
pub use states::{make_reference_state, StateKind};

use crate::error::{Error, Result};
use crate::linalg::{
    ensure_hermitian, hermitian_deviation, hermitize, trace_re, CMatrix, HERMITIAN_TOL,
};

/// A Hermitian Hamiltonian together with its ascending eigendecomposition.
#[derive(Debug, Clone)]
pub struct HamiltonianData {
    matrix: CMatrix,
    eigen: Eigen,
}

impl HamiltonianData {
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let eigen = eigendecompose_hermitian(&matrix)?;
        Ok(Self {
            matrix: hermitize(&matrix),
            eigen,
        })
    }

    /// Diagonal Hamiltonian with the given energies (must be ascending).
    pub fn diagonal(energies: &[f64]) -> Result<Self> {
        if energies.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Config("energies must be ascending".into()));
        }
        Self::from_matrix(crate::linalg::diag_real(energies))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Ascending energies `E_1 ≤ … ≤ E_d`.
    pub fn energies(&self) -> &[f64] {
        &self.eigen.values
    }

    /// Energy eigenvectors as columns, aligned with [`energies`](Self::energies).
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigen.vectors
    }

    pub fn eigen(&self) -> &Eigen {
        &self.eigen
    }

    /// `|E_j⟩⟨E_j|`.
    pub fn projector(&self, j: usize) -> CMatrix {
        let v = self.eigen.vectors.column(j);
        &v * v.adjoint()
    }

    pub fn mean_energy(&self, rho: &DensityMatrix) -> f64 {
        crate::linalg::trace_product_re(&self.matrix, rho.matrix())
    }
}

/// Tolerances a matrix must meet to be accepted as a quantum state.
pub const STATE_TRACE_TOL: f64 = 1e-10;
pub const STATE_PSD_TOL: f64 = 1e-9;

/// Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        ensure_hermitian(&matrix, HERMITIAN_TOL)?;
        let tr = trace_re(&matrix);
        if (tr - 1.0).abs() > STATE_TRACE_TOL {
            return Err(Error::Config(format!("state trace is {tr}, expected 1")));
        }
        let matrix = hermitize(&matrix);
        let min_eig = eigendecompose_hermitian(&matrix)?.values[0];
        if min_eig < -STATE_PSD_TOL {
            return Err(Error::Config(format!(
                "state has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self(matrix))
    }

    /// Closest state obtained by clipping negative eigenvalues and renormalising.
    pub fn project(matrix: &CMatrix) -> Result<Self> {
        let e = eigendecompose_hermitian(&hermitize(matrix))?;
        let clipped: Vec<f64> = e.values.iter().map(|&v| v.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        if total <= 0.0 {
            return Err(Error::Config("projection onto states is empty".into()));
        }
        let scaled = Eigen {
            values: clipped.iter().map(|v| v / total).collect(),
            vectors: e.vectors,
        };
        Ok(Self(hermitize(&scaled.reconstruct())))
    }

    pub fn pure(psi: &[num_complex::Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<_> = psi.iter().map(|z| z / norm).collect();
        Ok(Self(crate::linalg::outer(&v)))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(CMatrix::identity(d, d).unscale(d as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn purity(&self) -> f64 {
        crate::linalg::trace_product_re(&self.0, &self.0)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        hermitian_deviation(&self.0)
    }
}
