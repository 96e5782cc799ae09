//! Closed-form bounds for two fully solvable measurement settings.
//!
//! Qubit convention: `H = diag(ε₀, ε₁)` in the computational basis and
//! `z* = tr(ρσ_z)`, so the ground state `|0⟩` carries population
//! `(1 + z*)/2`.

use serde::{Deserialize, Serialize};

use crate::ergotropy::{sorted_descending, validate_distribution};
use crate::error::{Error, Result};

const BLOCH_TOL: f64 = 1e-12;

/// Tight bound when only energy-level populations are known:
/// `Σ p_i ε_i − Σ p↓_i ε_i`, the incoherent ergotropy.
pub fn energy_basis_bound(p: &[f64], energies: &[f64]) -> Result<f64> {
    validate_distribution(p)?;
    if p.len() != energies.len() {
        return Err(Error::LengthMismatch(p.len(), energies.len()));
    }
    if energies.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Config("energies must be ascending".into()));
    }
    let mean: f64 = p.iter().zip(energies).map(|(p, e)| p * e).sum();
    let passive: f64 = sorted_descending(p).iter().zip(energies).map(|(p, e)| p * e).sum();
    Ok((mean - passive).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitXzInput {
    pub x_star: f64,
    pub z_star: f64,
    /// `(ε₀, ε₁)` with `ε₀ ≤ ε₁`.
    pub energies: (f64, f64),
}

impl QubitXzInput {
    pub fn new(x_star: f64, z_star: f64, energies: (f64, f64)) -> Result<Self> {
        let input = Self {
            x_star,
            z_star,
            energies,
        };
        input.validate()?;
        Ok(input)
    }

    pub fn validate(&self) -> Result<()> {
        let (x, z) = (self.x_star, self.z_star);
        if !x.is_finite() || !z.is_finite() || x * x + z * z > 1.0 + BLOCH_TOL {
            return Err(Error::OutsideBlochBall(x, z));
        }
        if !(self.energies.0 <= self.energies.1) {
            return Err(Error::Config(format!(
                "qubit energies {:?} must satisfy e0 <= e1",
                self.energies
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitXzBound {
    pub bound: f64,
    /// Excess over the population-only bound.
    pub coherent_gain: f64,
}

/// Least ergotropy over qubit states with `⟨σ_x⟩ = x*` and `⟨σ_z⟩ = z*`.
///
/// The minimiser has `⟨σ_y⟩ = 0`; with `r = √(x*² + z*²)` its ergotropy is
/// `(ε₁ − ε₀)(r − z*)/2`. The gain over populations alone is
/// `(ε₁ − ε₀)(r − |z*|)/2`, positive exactly when `x* ≠ 0` and `ε₁ > ε₀`.
pub fn qubit_xz_bound(input: &QubitXzInput) -> Result<QubitXzBound> {
    input.validate()?;
    let (e0, e1) = input.energies;
    let z = input.z_star;
    let r = (input.x_star.hypot(z)).min(1.0);
    let bound = 0.5 * (e1 - e0) * (r - z);
    let incoherent = energy_basis_bound(&[0.5 * (1.0 + z), 0.5 * (1.0 - z)], &[e0, e1])?;
    Ok(QubitXzBound {
        bound,
        coherent_gain: bound - incoherent,
    })
}
