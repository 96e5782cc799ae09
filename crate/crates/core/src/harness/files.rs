use std::io::Write;

use serde::Serialize;

use super::{write_provenance, write_rows};
use crate::certification::{certify, certify_monotone, CertifyOptions, MonotoneSession};
use crate::error::{Error, Result};
use crate::measurement::ExperimentPlan;
use crate::models::HamiltonianData;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrefixStatus {
    Certified,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifyFileRow {
    #[serde(rename = "K")]
    pub k: usize,
    pub bound: f64,
    /// Step-(ii) value; empty when the prefix was infeasible.
    pub raw_min: Option<f64>,
    pub unitary_updated: bool,
    pub status: PrefixStatus,
    /// Smallest uniform widening that restores feasibility.
    pub advice: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyFileOutput {
    pub rows: Vec<CertifyFileRow>,
    pub best_bound: f64,
    /// Largest `K` at which the retained unitary changed.
    pub last_updated_k: Option<usize>,
}

impl CertifyFileOutput {
    pub fn infeasible_count(&self) -> usize {
        self.rows.iter().filter(|r| r.status == PrefixStatus::Infeasible).count()
    }

    pub fn final_bound(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.bound)
    }
}

/// Certifies every record prefix `K = 1..=len` in file order.
///
/// Half-widths use the whole plan's `K`, so consecutive prefixes are nested.
/// An infeasible prefix keeps the previous bound.
pub fn run_certify_file(
    plan: &ExperimentPlan,
    h: &HamiltonianData,
    options: &CertifyOptions,
    monotone: bool,
) -> Result<CertifyFileOutput> {
    let d = 1usize << plan.num_qubits();
    if h.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: h.dim(),
        });
    }
    let mut session = MonotoneSession::new();
    let mut rows = Vec::with_capacity(plan.len());
    let mut carried = 0.0;
    for k in 1..=plan.len() {
        let spec = plan.feasible_set(k)?;
        let outcome = if monotone {
            certify_monotone(session.clone(), &spec, h, options).map(|(s, res)| {
                let updated = s.history.last().is_some_and(|e| e.unitary_updated);
                session = s;
                (res, updated)
            })
        } else {
            certify(&spec, h, options).map(|res| (res, true))
        };
        let row = match outcome {
            Ok((res, updated)) => CertifyFileRow {
                k,
                bound: res.bound,
                raw_min: Some(res.raw_min),
                unitary_updated: updated,
                status: PrefixStatus::Certified,
                advice: None,
            },
            Err(Error::InfeasibleSet { advice_epsilon }) => {
                log::warn!("prefix K = {k} is infeasible; keeping bound {carried}");
                CertifyFileRow {
                    k,
                    bound: carried,
                    raw_min: None,
                    unitary_updated: false,
                    status: PrefixStatus::Infeasible,
                    advice: advice_epsilon,
                }
            }
            Err(e) => return Err(e),
        };
        log::debug!("K = {k}: bound {}", row.bound);
        carried = row.bound;
        rows.push(row);
    }
    let best_bound = rows.iter().map(|r| r.bound).fold(0.0, f64::max);
    let last_updated_k = rows.iter().rev().find(|r| r.unitary_updated).map(|r| r.k);
    Ok(CertifyFileOutput {
        rows,
        best_bound,
        last_updated_k,
    })
}

pub fn write_certify_file_csv<W: Write>(mut out: W, header: &[String], output: &CertifyFileOutput) -> Result<()> {
    let mut lines = vec!["command=certify-file".to_string()];
    lines.extend_from_slice(header);
    lines.push(format!("best_bound={}", output.best_bound));
    lines.push(format!(
        "last_updated_k={}",
        output.last_updated_k.map_or("none".to_string(), |k| k.to_string())
    ));
    write_provenance(&mut out, &lines)?;
    write_rows(out, &output.rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ergotropy::exact_ergotropy;
    use crate::measurement::{simulate_plan, ShotRecord};
    use crate::models::{build_spin_chain, make_reference_state, SpinChainParams, StateKind};
    use crate::pauli::{hierarchical_order, parse_pauli};

    #[test]
    fn simulated_ghz_records_give_nondecreasing_curve() {
        let n = 3;
        let h = build_spin_chain(&SpinChainParams::xxz(n, 1.0, 0.5, 0.0)).unwrap();
        let rho = make_reference_state(StateKind::Ghz, Some(&h), n).unwrap();
        let exact = exact_ergotropy(&rho, &h).unwrap().value;
        let strings: Vec<_> = hierarchical_order(n, 3).into_iter().take(40).collect();
        let plan = simulate_plan(&rho, &strings, 1 << 14, 0.003, 17).unwrap();
        let out = run_certify_file(&plan, &h, &CertifyOptions::default(), true).unwrap();
        assert_eq!(out.rows.len(), 40);
        assert!(out.rows.windows(2).all(|w| w[1].bound >= w[0].bound - 1e-9));
        assert!(out.final_bound() > 0.0 && out.final_bound() <= exact + 1e-6);
        assert_eq!(out.rows[0].unitary_updated, true);
        assert!(out.last_updated_k.is_some());
    }

    #[test]
    fn single_noisy_record_gives_trivial_bound() {
        let h = build_spin_chain(&SpinChainParams::xxz(2, 1.0, 0.5, 0.0)).unwrap();
        let plan = ExperimentPlan::new(
            vec![ShotRecord {
                pauli: parse_pauli("XX").unwrap(),
                shots: 1,
                estimate: 1.0,
            }],
            0.05,
        )
        .unwrap();
        let out = run_certify_file(&plan, &h, &CertifyOptions::default(), true).unwrap();
        assert_eq!(out.rows[0].bound, 0.0);
    }

    #[test]
    fn dimension_checked() {
        let h = build_spin_chain(&SpinChainParams::xxz(3, 1.0, 0.5, 0.0)).unwrap();
        let plan = ExperimentPlan::new(
            vec![ShotRecord {
                pauli: parse_pauli("XX").unwrap(),
                shots: 10,
                estimate: 0.2,
            }],
            0.05,
        )
        .unwrap();
        assert!(matches!(
            run_certify_file(&plan, &h, &CertifyOptions::default(), false),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
