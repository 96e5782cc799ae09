use std::io::Write;

use serde::Serialize;

use super::config::HamiltonianConfig;
use super::{write_provenance, write_rows};
use crate::analytic::{energy_basis_bound, qubit_xz_bound, QubitXzInput};
use crate::certification::{certify, qubit_minimax_oracle, CertifyOptions, FeasibleSetSpec, Provenance};
use crate::ergotropy::{energy_populations, exact_ergotropy};
use crate::error::Result;
use crate::models::{make_reference_state, HamiltonianData, StateKind};
use crate::pauli::expectation;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyComparisonRow {
    pub s: f64,
    pub mean_energy: f64,
    pub exact: f64,
    pub two_step: f64,
    pub energy_basis: f64,
}

/// For each `s`, the state `∝ |E₁⟩ + s|E_d⟩` is certified from the exact
/// expectations of the Pauli terms of `H`, and compared with the bound from
/// its energy populations alone.
pub fn run_energy_comparison(
    hamiltonian: &HamiltonianConfig,
    n: usize,
    s_values: &[f64],
    options: &CertifyOptions,
) -> Result<Vec<EnergyComparisonRow>> {
    let params = hamiltonian.params(n);
    let h = hamiltonian.build(n)?;
    let terms = params.pauli_terms();
    s_values
        .iter()
        .map(|&s| {
            let rho = make_reference_state(StateKind::ExtremalSuperposition { s }, Some(&h), n)?;
            let mut spec = FeasibleSetSpec::new(h.dim(), Provenance::Exact);
            for (p, _) in &terms {
                spec.push_pauli(p, expectation(rho.matrix(), p)?, 0.0)?;
            }
            let pops = energy_populations(&rho, &h)?;
            Ok(EnergyComparisonRow {
                s,
                mean_energy: h.mean_energy(&rho),
                exact: exact_ergotropy(&rho, &h)?.value,
                two_step: certify(&spec, &h, options)?.bound,
                energy_basis: energy_basis_bound(&pops, h.energies())?,
            })
        })
        .collect()
}

pub fn write_energy_comparison_csv<W: Write>(
    mut out: W,
    header: &[String],
    rows: &[EnergyComparisonRow],
) -> Result<()> {
    let mut lines = vec!["command=analytic".to_string()];
    lines.extend_from_slice(header);
    write_provenance(&mut out, &lines)?;
    write_rows(out, rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitComparison {
    pub closed_form: f64,
    pub coherent_gain: f64,
    pub two_step: f64,
    pub oracle: f64,
}

/// Closed form, two-step protocol and grid oracle for `⟨σ_x⟩ = x*`,
/// `⟨σ_z⟩ = z*`.
pub fn run_qubit_comparison(
    input: &QubitXzInput,
    resolution: usize,
    options: &CertifyOptions,
) -> Result<QubitComparison> {
    let closed = qubit_xz_bound(input)?;
    let h = HamiltonianData::diagonal(&[input.energies.0, input.energies.1])?;
    let mut spec = FeasibleSetSpec::new(2, Provenance::Exact);
    spec.push_pauli(&"X".parse()?, input.x_star, 0.0)?;
    spec.push_pauli(&"Z".parse()?, input.z_star, 0.0)?;
    Ok(QubitComparison {
        closed_form: closed.bound,
        coherent_gain: closed.coherent_gain,
        two_step: certify(&spec, &h, options)?.bound,
        oracle: qubit_minimax_oracle(&spec, &h, resolution)?,
    })
}
