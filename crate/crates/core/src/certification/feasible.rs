use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_dim, ensure_hermitian, hermitize, max_abs_diff, trace_product_re, CMatrix, HERMITIAN_TOL};
use crate::models::{eigendecompose_hermitian, DensityMatrix};
use crate::pauli::{pauli_matrix_with_limit, PauliString};
use crate::sdp::SdpProblem;

/// Spectral radius an observable may exceed 1 by and still be accepted.
const SPECTRUM_TOL: f64 = 1e-9;
/// Slack allowed when comparing constraint lists for nesting.
const NESTING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Exact,
    Estimated,
}

/// `|tr(O X) − target| ≤ epsilon`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub observable: CMatrix,
    pub target: f64,
    pub epsilon: f64,
    pub label: Option<String>,
}

impl Constraint {
    pub fn lower(&self) -> f64 {
        self.target - self.epsilon
    }

    pub fn upper(&self) -> f64 {
        self.target + self.epsilon
    }

    pub fn holds(&self, x: &CMatrix, tol: f64) -> bool {
        let v = trace_product_re(&self.observable, x);
        v >= self.lower() - tol && v <= self.upper() + tol
    }
}

/// Linear description of the states compatible with measured data.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleSetSpec {
    dim: usize,
    constraints: Vec<Constraint>,
    provenance: Provenance,
}

impl FeasibleSetSpec {
    pub fn new(dim: usize, provenance: Provenance) -> Self {
        Self {
            dim,
            constraints: Vec::new(),
            provenance,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Number of constraints `K`.
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Appends a constraint; the observable must have spectrum in `[-1, 1]`.
    pub fn push(&mut self, observable: CMatrix, target: f64, epsilon: f64) -> Result<()> {
        self.push_labelled(observable, target, epsilon, None)
    }

    pub fn push_labelled(
        &mut self,
        observable: CMatrix,
        target: f64,
        epsilon: f64,
        label: Option<String>,
    ) -> Result<()> {
        ensure_dim(&observable, self.dim)?;
        ensure_hermitian(&observable, HERMITIAN_TOL)?;
        if !target.is_finite() {
            return Err(Error::Config("constraint target must be finite".into()));
        }
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::Config(format!("epsilon must be finite and non-negative, got {epsilon}")));
        }
        let radius = spectral_radius(&observable)?;
        if radius > 1.0 + SPECTRUM_TOL {
            return Err(Error::Config(format!(
                "observable has spectral radius {radius}; rescale it into [-1, 1]"
            )));
        }
        self.constraints.push(Constraint {
            observable: hermitize(&observable),
            target,
            epsilon,
            label,
        });
        Ok(())
    }

    /// Divides observable, target and epsilon by the spectral radius first.
    /// Returns the factor used.
    pub fn push_rescaled(&mut self, observable: CMatrix, target: f64, epsilon: f64) -> Result<f64> {
        ensure_dim(&observable, self.dim)?;
        ensure_hermitian(&observable, HERMITIAN_TOL)?;
        let radius = spectral_radius(&observable)?;
        let scale = if radius > 0.0 { radius } else { 1.0 };
        self.push(observable.unscale(scale), target / scale, epsilon / scale)?;
        Ok(scale)
    }

    pub fn push_pauli(&mut self, p: &PauliString, target: f64, epsilon: f64) -> Result<()> {
        let n = p.num_qubits();
        if 1usize.checked_shl(n as u32) != Some(self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: 1usize.checked_shl(n as u32).unwrap_or(usize::MAX),
            });
        }
        if !target.is_finite() || !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::Config(format!("bad data for {p}: target {target}, epsilon {epsilon}")));
        }
        // Pauli strings are Hermitian with spectrum {±1}
        self.constraints.push(Constraint {
            observable: pauli_matrix_with_limit(p, n)?,
            target,
            epsilon,
            label: Some(p.to_string()),
        });
        Ok(())
    }

    /// Exact expectations of `rho` on the given strings.
    pub fn exact_from_state(rho: &DensityMatrix, strings: &[PauliString]) -> Result<Self> {
        let mut spec = Self::new(rho.dim(), Provenance::Exact);
        for p in strings {
            let v = crate::pauli::expectation(rho.matrix(), p)?;
            spec.push_pauli(p, v, 0.0)?;
        }
        Ok(spec)
    }

    /// Estimates with per-string tolerance.
    pub fn from_estimates(n: usize, data: &[(PauliString, f64)], epsilon: f64) -> Result<Self> {
        let mut spec = Self::new(1 << n, Provenance::Estimated);
        for (p, v) in data {
            if p.num_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.num_qubits(),
                });
            }
            spec.push_pauli(p, *v, epsilon)?;
        }
        Ok(spec)
    }

    /// The first `k` constraints.
    pub fn prefix(&self, k: usize) -> Self {
        Self {
            dim: self.dim,
            constraints: self.constraints[..k.min(self.len())].to_vec(),
            provenance: self.provenance,
        }
    }

    /// Whether every state satisfying `self` also satisfies `earlier`, checked
    /// structurally: `earlier` must be a prefix of `self` up to tightening.
    pub fn refines(&self, earlier: &FeasibleSetSpec) -> bool {
        if self.dim != earlier.dim || self.len() < earlier.len() {
            return false;
        }
        earlier.constraints.iter().zip(&self.constraints).all(|(old, new)| {
            max_abs_diff(&old.observable, &new.observable) <= NESTING_TOL
                && new.lower() >= old.lower() - NESTING_TOL
                && new.upper() <= old.upper() + NESTING_TOL
        })
    }

    /// Whether `x` meets every constraint to within `tol`.
    pub fn contains(&self, x: &CMatrix, tol: f64) -> bool {
        self.constraints.iter().all(|c| c.holds(x, tol))
    }

    /// Unit-trace SDP over the set, without objective.
    pub fn to_sdp_problem(&self) -> SdpProblem {
        let mut p = SdpProblem::states(self.dim);
        for c in &self.constraints {
            if c.epsilon == 0.0 {
                p = p.equality(c.observable.clone(), c.target);
            } else {
                p = p.interval(c.observable.clone(), c.lower(), c.upper());
            }
        }
        p
    }

    /// Every constraint as an interval, zero-width ones included, so that a
    /// uniform widening applies to all of them.
    pub(crate) fn inflation_problem(&self) -> SdpProblem {
        let mut p = SdpProblem::states(self.dim);
        for c in &self.constraints {
            p = p.interval(c.observable.clone(), c.lower(), c.upper());
        }
        p
    }
}

fn spectral_radius(m: &CMatrix) -> Result<f64> {
    let values = eigendecompose_hermitian(m)?.values;
    Ok(values[0].abs().max(values[values.len() - 1].abs()))
}
