use serde::{Deserialize, Serialize};

use super::protocol::{certify, step_two, CertificationResult, CertifyOptions};
use super::FeasibleSetSpec;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::models::HamiltonianData;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub k: usize,
    pub bound: f64,
    pub unitary_updated: bool,
}

/// State carried between calls of [`certify_monotone`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MonotoneSession {
    pub current_unitary: Option<CMatrix>,
    pub current_bound: f64,
    pub history: Vec<HistoryEntry>,
    previous: Option<FeasibleSetSpec>,
}

impl MonotoneSession {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bounds(&self) -> Vec<f64> {
        self.history.iter().map(|e| e.bound).collect()
    }
}

/// Certifies a refinement of the session's last feasible set.
///
/// The retained unitary is re-evaluated on the new set; a fresh two-step
/// unitary replaces it only when its step-(ii) value is strictly higher. The
/// reported bound never falls below the previous one: the new set is contained
/// in the old one, so the old certificate remains valid for it.
pub fn certify_monotone(
    mut session: MonotoneSession,
    spec: &FeasibleSetSpec,
    h: &HamiltonianData,
    options: &CertifyOptions,
) -> Result<(MonotoneSession, CertificationResult)> {
    if let Some(prev) = &session.previous {
        if !spec.refines(prev) {
            return Err(Error::NonNestedConstraints);
        }
    }
    let fresh = certify(spec, h, options)?;
    let (mut result, updated) = match &session.current_unitary {
        None => (fresh, true),
        Some(u) => {
            let (kept_raw, report) = step_two(spec, h, u, &options.solver)?;
            if fresh.raw_min > kept_raw {
                (fresh, true)
            } else {
                let mut kept = fresh;
                kept.raw_min = kept_raw;
                kept.bound = kept_raw.max(0.0);
                kept.unitary = u.clone();
                kept.diagnostics.step_two = report;
                (kept, false)
            }
        }
    };
    if session.current_unitary.is_some() {
        result.bound = result.bound.max(session.current_bound);
    }
    if updated {
        session.current_unitary = Some(result.unitary.clone());
    }
    session.current_bound = result.bound;
    session.history.push(HistoryEntry {
        k: spec.len(),
        bound: result.bound,
        unitary_updated: updated,
    });
    session.previous = Some(spec.clone());
    Ok((session, result))
}
