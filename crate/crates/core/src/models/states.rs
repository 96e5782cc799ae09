use serde::{Deserialize, Serialize};

use super::{DensityMatrix, Eigen, HamiltonianData};
use crate::error::{Error, Result};
use crate::linalg::{c, outer, ZERO};

/// Energy gap below which extremal levels count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Reference true states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateKind {
    /// `(|0…0⟩ + |1…1⟩)/√2`.
    Ghz,
    /// Uniform superposition of single-excitation basis states.
    W,
    /// `|0…0⟩`.
    Product,
    /// `e^{-βH}/Z`; `β < 0` gives population inversion.
    Gibbs { beta: f64 },
    /// `(|E_1⟩ + s|E_d⟩)/√(1+s²)`.
    ExtremalSuperposition { s: f64 },
}

impl StateKind {
    pub fn label(&self) -> String {
        match self {
            StateKind::Ghz => "ghz".into(),
            StateKind::W => "w".into(),
            StateKind::Product => "product".into(),
            StateKind::Gibbs { beta } => format!("gibbs(beta={beta})"),
            StateKind::ExtremalSuperposition { s } => format!("extremal(s={s})"),
        }
    }
}

impl std::str::FromStr for StateKind {
    type Err = Error;

    /// Accepts `ghz`, `w`, `product`, `gibbs:<beta>`, `extremal[:<s>]`.
    fn from_str(text: &str) -> Result<Self> {
        let lower = text.to_ascii_lowercase();
        let (name, arg) = match lower.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (lower.as_str(), None),
        };
        let number = |a: Option<&str>, default: Option<f64>| -> Result<f64> {
            match (a, default) {
                (Some(a), _) => a
                    .parse()
                    .map_err(|_| Error::Config(format!("bad number {a:?} in state {text:?}"))),
                (None, Some(v)) => Ok(v),
                (None, None) => Err(Error::Config(format!("state {text:?} needs a parameter"))),
            }
        };
        match name {
            "ghz" => Ok(StateKind::Ghz),
            "w" => Ok(StateKind::W),
            "product" | "prod" => Ok(StateKind::Product),
            "gibbs" => Ok(StateKind::Gibbs {
                beta: number(arg, None)?,
            }),
            "extremal" => Ok(StateKind::ExtremalSuperposition {
                s: number(arg, Some(1.0))?,
            }),
            other => Err(Error::Config(format!("unknown state kind {other:?}"))),
        }
    }
}

pub fn make_reference_state(
    kind: StateKind,
    h: Option<&HamiltonianData>,
    n: usize,
) -> Result<DensityMatrix> {
    let d = 1usize << n;
    if let Some(h) = h {
        if h.dim() != d && !matches!(kind, StateKind::Gibbs { .. } | StateKind::ExtremalSuperposition { .. }) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: h.dim(),
            });
        }
    }
    match kind {
        StateKind::Ghz => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let mut psi = vec![ZERO; d];
            psi[0] = c(s, 0.0);
            psi[d - 1] += c(s, 0.0);
            DensityMatrix::pure(&psi)
        }
        StateKind::W => {
            let amp = c(1.0 / (n as f64).sqrt(), 0.0);
            let mut psi = vec![ZERO; d];
            for site in 0..n {
                psi[1 << (n - 1 - site)] = amp;
            }
            DensityMatrix::pure(&psi)
        }
        StateKind::Product => {
            let mut psi = vec![ZERO; d];
            psi[0] = c(1.0, 0.0);
            DensityMatrix::pure(&psi)
        }
        StateKind::Gibbs { beta } => {
            let h = h.ok_or(Error::MissingHamiltonian)?;
            let energies = h.energies();
            // shift so the largest exponent is zero
            let exponents: Vec<f64> = energies.iter().map(|e| -beta * e).collect();
            let top = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let weights: Vec<f64> = exponents.iter().map(|x| (x - top).exp()).collect();
            let z: f64 = weights.iter().sum();
            let populated = Eigen {
                values: weights.iter().map(|w| w / z).collect(),
                vectors: h.eigenvectors().clone(),
            };
            DensityMatrix::new(crate::linalg::hermitize(&populated.reconstruct()))
        }
        StateKind::ExtremalSuperposition { s } => {
            let h = h.ok_or(Error::MissingHamiltonian)?;
            let e = h.energies();
            let dim = e.len();
            let gap = (e[1] - e[0]).min(e[dim - 1] - e[dim - 2]);
            if gap < DEGENERACY_TOL {
                return Err(Error::DegenerateExtremalLevels(gap));
            }
            let low = h.eigen().vector(0);
            let high = h.eigen().vector(dim - 1);
            let psi: Vec<_> = low
                .iter()
                .zip(&high)
                .map(|(a, b)| a + b * s)
                .collect();
            let norm = (1.0 + s * s).sqrt();
            let psi: Vec<_> = psi.iter().map(|z| z / norm).collect();
            DensityMatrix::new(outer(&psi))
        }
    }
}
