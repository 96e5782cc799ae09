use serde::{Deserialize, Serialize};

use super::FeasibleSetSpec;
use crate::ergotropy::{descending_spectrum, optimal_unitary};
use crate::error::{Error, Result};
use crate::linalg::{ensure_dim, hermitize, CMatrix};
use crate::models::{DensityMatrix, HamiltonianData};
use crate::sdp::{
    min_interval_inflation, solve_linear, solve_min_purity, SdpProblem, SdpSolution, SdpStatus,
    SolverOptions,
};

/// Spectral gap of `ρ̃` below which the choice of `Ũ⋆` is flagged as a
/// tie-break.
pub const RHO_DEGENERACY_TOL: f64 = 1e-8;

/// Objective `ℓ` minimised in step (i).
#[derive(Debug, Clone, PartialEq, Default)]
pub enum StepOneObjective {
    #[default]
    MinPurity,
    Linear(CMatrix),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CertifyOptions {
    pub objective: StepOneObjective,
    pub solver: SolverOptions,
}

/// Solver report for one SDP.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: SdpStatus,
    pub iterations: usize,
    pub duality_gap: f64,
    pub primal_residual: f64,
    pub dual_objective: f64,
}

impl From<&SdpSolution> for SolveReport {
    fn from(s: &SdpSolution) -> Self {
        Self {
            status: s.status,
            iterations: s.iterations,
            duality_gap: s.duality_gap,
            primal_residual: s.primal_residual,
            dual_objective: s.dual_objective,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub step_one: SolveReport,
    pub step_two: SolveReport,
    /// `ρ̃` was clipped to the state space after an unconverged solve.
    pub step_one_projected: bool,
    /// Smallest gap between consecutive eigenvalues of `ρ̃` when it is below
    /// [`RHO_DEGENERACY_TOL`].
    pub degenerate_gap: Option<f64>,
    pub solver: SolverOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationResult {
    /// Step-(ii) minimum; may be negative.
    pub raw_min: f64,
    /// `max(raw_min, 0)`.
    pub bound: f64,
    pub unitary: CMatrix,
    pub step1_state: DensityMatrix,
    pub diagnostics: Diagnostics,
}

pub(crate) fn infeasible_error(spec: &FeasibleSetSpec, opts: &SolverOptions) -> Error {
    let advice = min_interval_inflation(&spec.inflation_problem(), opts).ok().flatten();
    Error::InfeasibleSet {
        advice_epsilon: advice,
    }
}

pub(crate) struct StepOne {
    pub state: DensityMatrix,
    pub report: SolveReport,
    pub projected: bool,
}

pub(crate) fn step_one(
    spec: &FeasibleSetSpec,
    objective: &StepOneObjective,
    opts: &SolverOptions,
) -> Result<StepOne> {
    let problem = spec.to_sdp_problem();
    let sol = match objective {
        StepOneObjective::MinPurity => solve_min_purity(&problem, opts)?,
        StepOneObjective::Linear(l) => {
            ensure_dim(l, spec.dim())?;
            solve_linear(&problem.with_objective(l.clone()), opts)?
        }
    };
    let report = SolveReport::from(&sol);
    match sol.status {
        SdpStatus::Infeasible => Err(infeasible_error(spec, opts)),
        SdpStatus::Optimal => Ok(StepOne {
            state: DensityMatrix::project(&sol.x)?,
            report,
            projected: false,
        }),
        SdpStatus::MaxIterations => {
            log::warn!(
                "step (i) stopped after {} iterations; continuing with the projected iterate",
                sol.iterations
            );
            Ok(StepOne {
                state: DensityMatrix::project(&sol.x)?,
                report,
                projected: true,
            })
        }
    }
}

/// Step (i): a representative `ρ̃` of the feasible set.
pub fn step_one_select_state(
    spec: &FeasibleSetSpec,
    objective: &StepOneObjective,
    opts: &SolverOptions,
) -> Result<DensityMatrix> {
    Ok(step_one(spec, objective, opts)?.state)
}

/// `Ũ⋆ = Σ_j |E_j⟩⟨r̃_j|` for the descending eigenbasis of `ρ̃`.
pub fn build_tilde_unitary(rho_tilde: &DensityMatrix, h: &HamiltonianData) -> Result<CMatrix> {
    ensure_dim(rho_tilde.matrix(), h.dim())?;
    let spectrum = descending_spectrum(rho_tilde.matrix())?;
    Ok(optimal_unitary(&spectrum, h))
}

/// Smallest gap between consecutive eigenvalues, when below the tolerance.
pub(crate) fn degeneracy(rho: &DensityMatrix) -> Result<Option<f64>> {
    let values = descending_spectrum(rho.matrix())?.values;
    let gap = values
        .windows(2)
        .map(|w| (w[0] - w[1]).abs())
        .fold(f64::INFINITY, f64::min);
    Ok((gap < RHO_DEGENERACY_TOL).then_some(gap))
}

pub(crate) fn step_two(
    spec: &FeasibleSetSpec,
    h: &HamiltonianData,
    u: &CMatrix,
    opts: &SolverOptions,
) -> Result<(f64, SolveReport)> {
    ensure_dim(u, h.dim())?;
    ensure_dim(h.matrix(), spec.dim())?;
    let dev = crate::linalg::unitarity_deviation(u);
    if dev > crate::ergotropy::UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    let hm = h.matrix();
    let objective = hermitize(&(hm - u.adjoint() * hm * u));
    let problem: SdpProblem = spec.to_sdp_problem().with_objective(objective);
    let sol = solve_linear(&problem, opts)?;
    let report = SolveReport::from(&sol);
    match sol.status {
        SdpStatus::Optimal => Ok((sol.objective_value, report)),
        SdpStatus::Infeasible => Err(infeasible_error(spec, opts)),
        // Without a strictly feasible state the multipliers diverge and the gap
        // stalls; a dual-feasible point still bounds the minimum from below.
        SdpStatus::MaxIterations if sol.dual_residual <= opts.tol_feas && sol.dual_objective.is_finite() => {
            let value = sol.dual_objective.min(sol.objective_value);
            log::info!(
                "step (ii) stalled at gap {:.2e}; using the dual bound {value}",
                sol.duality_gap
            );
            Ok((value, report))
        }
        SdpStatus::MaxIterations => Err(Error::StepTwoFailed(format!(
            "no convergence after {} iterations (gap {:.2e}, residual {:.2e})",
            sol.iterations, sol.duality_gap, sol.primal_residual
        ))),
    }
}

/// Step (ii): `min_{X ∈ Ω} tr(HX) − tr(H U X U†)`.
pub fn step_two_bound(
    spec: &FeasibleSetSpec,
    h: &HamiltonianData,
    u: &CMatrix,
    opts: &SolverOptions,
) -> Result<f64> {
    Ok(step_two(spec, h, u, opts)?.0)
}

/// The full two-step protocol.
pub fn certify(
    spec: &FeasibleSetSpec,
    h: &HamiltonianData,
    options: &CertifyOptions,
) -> Result<CertificationResult> {
    ensure_dim(h.matrix(), spec.dim())?;
    let one = step_one(spec, &options.objective, &options.solver)?;
    let degenerate_gap = degeneracy(&one.state)?;
    if let Some(gap) = degenerate_gap {
        log::info!("step (i) state has a spectral gap of {gap:.2e}; eigenbasis tie-break fixes the unitary");
    }
    let unitary = build_tilde_unitary(&one.state, h)?;
    let (raw_min, two) = step_two(spec, h, &unitary, &options.solver)?;
    Ok(CertificationResult {
        raw_min,
        bound: raw_min.max(0.0),
        unitary,
        step1_state: one.state,
        diagnostics: Diagnostics {
            step_one: one.report,
            step_two: two,
            step_one_projected: one.projected,
            degenerate_gap,
            solver: options.solver,
        },
    })
}
