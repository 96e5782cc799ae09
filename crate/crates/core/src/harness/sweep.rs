use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::config::SweepConfig;
use super::{aggregate_median_iqr, write_provenance};
use crate::certification::{certify, certify_monotone, FeasibleSetSpec, MonotoneSession};
use crate::ergotropy::exact_ergotropy;
use crate::error::{Error, Result};
use crate::measurement::{simulate_plan, ExperimentPlan};
use crate::models::make_reference_state;
use crate::pauli::hierarchical_order;
use crate::random::derive_seed;

/// Seed-derivation tags.
const ORDER_STREAM: u64 = 0;
const SHOT_STREAM: u64 = 1;

/// Aggregate over realizations at one `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "K")]
    pub k: usize,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub exact: f64,
    pub feasibility_failures: usize,
}

/// Bounds of one realization, indexed like the resolved `K` list.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationTrace {
    pub seed: u64,
    pub bounds: Vec<f64>,
    pub infeasible: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub k_list: Vec<usize>,
    pub exact: f64,
    pub rows: Vec<SweepRow>,
    pub realizations: Vec<RealizationTrace>,
}

impl SweepOutput {
    pub fn total_failures(&self) -> usize {
        self.rows.iter().map(|r| r.feasibility_failures).sum()
    }
}

pub fn realization_seed(base: u64, r: usize) -> u64 {
    derive_seed(base, &[r as u64, ORDER_STREAM])
}

fn shot_seed(base: u64, r: usize) -> u64 {
    derive_seed(base, &[r as u64, SHOT_STREAM])
}

/// Runs every realization and aggregates per `K`.
///
/// An infeasible set is counted in `feasibility_failures` and contributes the
/// trivial bound 0, or in monotone mode the bound carried from the previous
/// `K`.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutput> {
    config.validate()?;
    let n = config.n;
    let h = config.hamiltonian.build(n)?;
    let rho = make_reference_state(config.state, Some(&h), n)?;
    let exact = exact_ergotropy(&rho, &h)?.value;
    let k_list = config.resolved_k_list();
    let k_max = *k_list.last().ok_or(Error::EmptyInput)?;
    let opts = config.objective.certify_options(&h, config.solver);

    let traces = (0..config.realizations)
        .into_par_iter()
        .map(|r| -> Result<RealizationTrace> {
            let seed = realization_seed(config.seed, r);
            let order = hierarchical_order(n, seed);
            let strings = &order[..k_max];
            let plan = match (config.shots, config.delta) {
                (Some(shots), Some(delta)) => Some(simulate_plan(&rho, strings, shots, delta, shot_seed(config.seed, r))?),
                _ => None,
            };
            let spec_for = |k: usize| -> Result<FeasibleSetSpec> {
                match &plan {
                    None => FeasibleSetSpec::exact_from_state(&rho, &strings[..k]),
                    // nested sets need one union bound over the whole chain
                    Some(p) if config.monotone => p.feasible_set(k),
                    Some(p) => ExperimentPlan::new(p.records()[..k].to_vec(), p.delta())?.feasible_set(k),
                }
            };
            let mut bounds = Vec::with_capacity(k_list.len());
            let mut infeasible = Vec::with_capacity(k_list.len());
            let mut session = MonotoneSession::new();
            for &k in &k_list {
                let spec = spec_for(k)?;
                let outcome = if config.monotone {
                    certify_monotone(session.clone(), &spec, &h, &opts).map(|(s, res)| {
                        session = s;
                        res.bound
                    })
                } else {
                    certify(&spec, &h, &opts).map(|res| res.bound)
                };
                match outcome {
                    Ok(b) => {
                        bounds.push(b);
                        infeasible.push(false);
                    }
                    Err(Error::InfeasibleSet { advice_epsilon }) => {
                        log::info!("realization {r}, K = {k}: infeasible (advice {advice_epsilon:?})");
                        bounds.push(if config.monotone { session.current_bound } else { 0.0 });
                        infeasible.push(true);
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(RealizationTrace {
                seed,
                bounds,
                infeasible,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let rows = k_list
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let values: Vec<f64> = traces.iter().map(|t| t.bounds[i]).collect();
            let (median, q25, q75) = aggregate_median_iqr(&values)?;
            Ok(SweepRow {
                k,
                median,
                q25,
                q75,
                exact,
                feasibility_failures: traces.iter().filter(|t| t.infeasible[i]).count(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepOutput {
        k_list,
        exact,
        rows,
        realizations: traces,
    })
}

pub fn write_sweep_csv<W: Write>(mut out: W, config: &SweepConfig, output: &SweepOutput) -> Result<()> {
    let seeds: Vec<String> = output.realizations.iter().map(|t| t.seed.to_string()).collect();
    write_provenance(
        &mut out,
        &[
            "command=sweep".to_string(),
            format!("config={}", config.to_json()),
            format!(
                "hamiltonian={}",
                serde_json::to_string(&config.hamiltonian.params(config.n)).map_err(|e| Error::Io(e.to_string()))?
            ),
            format!("base_seed={}", config.seed),
            format!("realization_seeds={}", seeds.join(" ")),
        ],
    )?;
    super::write_rows(out, &output.rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::HamiltonianConfig;
    use crate::models::{ModelPreset, StateKind};

    fn small(monotone: bool, shots: Option<u64>) -> SweepConfig {
        SweepConfig {
            n: 2,
            realizations: 3,
            seed: 11,
            monotone,
            shots,
            delta: shots.map(|_| 0.05),
            k_list: vec![1, 3, 6, 15],
            ..SweepConfig::default()
        }
    }

    #[test]
    fn exact_sweep_is_sound_and_complete() {
        let out = run_sweep(&small(false, None)).unwrap();
        for row in &out.rows {
            assert!(row.q25 <= row.median && row.median <= row.q75);
            assert!(row.q75 <= row.exact + 1e-6);
            assert_eq!(row.feasibility_failures, 0);
        }
        let last = out.rows.last().unwrap();
        assert!((last.median - out.exact).abs() < 1e-5);
    }

    #[test]
    fn monotone_traces_never_decrease() {
        for shots in [None, Some(2000)] {
            let out = run_sweep(&small(true, shots)).unwrap();
            for t in &out.realizations {
                assert!(t.bounds.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{:?}", t.bounds);
            }
        }
    }

    #[test]
    fn csv_is_reproducible() {
        let cfg = SweepConfig {
            hamiltonian: HamiltonianConfig {
                preset: ModelPreset::Annni,
                j1: 1.0,
                j2: -1.0,
                b: 0.5,
                ..HamiltonianConfig::default()
            },
            state: StateKind::ExtremalSuperposition { s: 1.0 },
            ..small(false, Some(500))
        };
        let render = || {
            let mut buf = Vec::new();
            write_sweep_csv(&mut buf, &cfg, &run_sweep(&cfg).unwrap()).unwrap();
            String::from_utf8(buf).unwrap()
        };
        let a = render();
        assert_eq!(a, render());
        assert!(a.starts_with("# schema=1\n"));
        assert!(a.contains("\nK,median,q25,q75,exact,feasibility_failures\n"));
    }
}
