//! Open-boundary spin-chain Hamiltonians
//!
//! `H = -J1 Σ XX(i,i+1) - J2 Σ XX(i,i+2) - B Σ Z(i) - G Σ X(i) - Jy Σ YY(i,i+1) - Δ Σ ZZ(i,i+1)`

use serde::{Deserialize, Serialize};

use super::HamiltonianData;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pauli::{Pauli, PauliString, DEFAULT_MAX_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinChainParams {
    pub n: usize,
    #[serde(default)]
    pub j1: f64,
    #[serde(default)]
    pub j2: f64,
    #[serde(default)]
    pub b: f64,
    #[serde(default)]
    pub g: f64,
    #[serde(default)]
    pub jy: f64,
    #[serde(default)]
    pub delta: f64,
}

/// Named parameter regimes of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelPreset {
    /// Axial next-nearest-neighbour Ising: `G = Jy = Δ = 0`.
    Annni,
    /// XXZ with transverse field: `G = J2 = 0`, `Jy = J1`.
    Xxz,
    /// Mixed-field Ising: `J1 = J2 = Jy = 0`.
    Mfi,
    /// All couplings as given.
    Custom,
}

impl std::str::FromStr for ModelPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "annni" => Ok(Self::Annni),
            "xxz" => Ok(Self::Xxz),
            "mfi" => Ok(Self::Mfi),
            "custom" => Ok(Self::Custom),
            other => Err(Error::Config(format!("unknown model preset {other:?}"))),
        }
    }
}

impl ModelPreset {
    /// Zeroes or ties the couplings the regime fixes.
    pub fn apply(self, p: SpinChainParams) -> SpinChainParams {
        match self {
            ModelPreset::Annni => SpinChainParams {
                g: 0.0,
                jy: 0.0,
                delta: 0.0,
                ..p
            },
            ModelPreset::Xxz => SpinChainParams {
                g: 0.0,
                j2: 0.0,
                jy: p.j1,
                ..p
            },
            ModelPreset::Mfi => SpinChainParams {
                j1: 0.0,
                j2: 0.0,
                jy: 0.0,
                ..p
            },
            ModelPreset::Custom => p,
        }
    }
}

impl SpinChainParams {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            j1: 0.0,
            j2: 0.0,
            b: 0.0,
            g: 0.0,
            jy: 0.0,
            delta: 0.0,
        }
    }

    pub fn annni(n: usize, j1: f64, j2: f64, b: f64) -> Self {
        Self {
            j1,
            j2,
            b,
            ..Self::zero(n)
        }
    }

    pub fn xxz(n: usize, j1: f64, delta: f64, b: f64) -> Self {
        Self {
            j1,
            jy: j1,
            delta,
            b,
            ..Self::zero(n)
        }
    }

    pub fn mfi(n: usize, b: f64, g: f64, delta: f64) -> Self {
        Self {
            b,
            g,
            delta,
            ..Self::zero(n)
        }
    }

    /// Pauli terms `(P, h_P)` of the Hamiltonian; zero couplings are omitted.
    pub fn pauli_terms(&self) -> Vec<(PauliString, f64)> {
        let n = self.n;
        let mut terms = Vec::new();
        let mut push = |sites: &[(usize, Pauli)], coeff: f64| {
            if coeff == 0.0 {
                return;
            }
            let mut symbols = vec![Pauli::I; n];
            for &(site, p) in sites {
                symbols[site] = p;
            }
            terms.push((PauliString::new(symbols).expect("n >= 1"), coeff));
        };
        for i in 0..n.saturating_sub(1) {
            push(&[(i, Pauli::X), (i + 1, Pauli::X)], -self.j1);
        }
        for i in 0..n.saturating_sub(2) {
            push(&[(i, Pauli::X), (i + 2, Pauli::X)], -self.j2);
        }
        for i in 0..n {
            push(&[(i, Pauli::Z)], -self.b);
        }
        for i in 0..n {
            push(&[(i, Pauli::X)], -self.g);
        }
        for i in 0..n.saturating_sub(1) {
            push(&[(i, Pauli::Y), (i + 1, Pauli::Y)], -self.jy);
        }
        for i in 0..n.saturating_sub(1) {
            push(&[(i, Pauli::Z), (i + 1, Pauli::Z)], -self.delta);
        }
        terms
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        self.matrix_with_limit(DEFAULT_MAX_QUBITS)
    }

    pub fn matrix_with_limit(&self, max_qubits: usize) -> Result<CMatrix> {
        if self.n < 2 {
            return Err(Error::Config(format!(
                "spin chains need at least 2 sites, got {}",
                self.n
            )));
        }
        if self.n > max_qubits {
            return Err(Error::DimensionTooLarge {
                qubits: self.n,
                limit: max_qubits,
            });
        }
        let d = 1usize << self.n;
        let mut h = CMatrix::zeros(d, d);
        for (p, coeff) in self.pauli_terms() {
            for (r, col, v) in p.entries() {
                h[(r, col)] += v * coeff;
            }
        }
        Ok(h)
    }
}

pub fn build_spin_chain(params: &SpinChainParams) -> Result<HamiltonianData> {
    HamiltonianData::from_matrix(params.matrix()?)
}
