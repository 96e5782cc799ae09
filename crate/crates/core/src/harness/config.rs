use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::certification::{CertifyOptions, StepOneObjective};
use crate::error::{Error, Result};
use crate::models::{build_spin_chain, HamiltonianData, ModelPreset, SpinChainParams, StateKind};
use crate::sdp::SolverOptions;

/// Largest `n` accepted without `allow_slow`.
pub const DESK_MAX_QUBITS: usize = 3;
/// Largest `n` accepted at all.
pub const SLOW_MAX_QUBITS: usize = 5;

/// Spin-chain couplings plus the regime that constrains them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HamiltonianConfig {
    pub preset: ModelPreset,
    pub j1: f64,
    pub j2: f64,
    pub b: f64,
    pub g: f64,
    pub jy: f64,
    pub delta: f64,
}

impl Default for HamiltonianConfig {
    fn default() -> Self {
        Self {
            preset: ModelPreset::Xxz,
            j1: 1.0,
            j2: 0.0,
            b: 0.0,
            g: 0.0,
            jy: 1.0,
            delta: 0.5,
        }
    }
}

impl HamiltonianConfig {
    pub fn params(&self, n: usize) -> SpinChainParams {
        self.preset.apply(SpinChainParams {
            n,
            j1: self.j1,
            j2: self.j2,
            b: self.b,
            g: self.g,
            jy: self.jy,
            delta: self.delta,
        })
    }

    pub fn build(&self, n: usize) -> Result<HamiltonianData> {
        build_spin_chain(&self.params(n))
    }
}

/// Step-(i) objective as named in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveMode {
    #[default]
    MinPurity,
    /// Lowest-energy compatible state.
    MinEnergy,
    /// Highest-energy compatible state.
    MaxEnergy,
}

impl std::str::FromStr for ObjectiveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "min_purity" | "purity" => Ok(ObjectiveMode::MinPurity),
            "min_energy" => Ok(ObjectiveMode::MinEnergy),
            "max_energy" => Ok(ObjectiveMode::MaxEnergy),
            other => Err(Error::Config(format!("unknown objective {other:?}"))),
        }
    }
}

impl ObjectiveMode {
    pub fn certify_options(&self, h: &HamiltonianData, solver: SolverOptions) -> CertifyOptions {
        let objective = match self {
            ObjectiveMode::MinPurity => StepOneObjective::MinPurity,
            ObjectiveMode::MinEnergy => StepOneObjective::Linear(h.matrix().clone()),
            ObjectiveMode::MaxEnergy => StepOneObjective::Linear(-h.matrix().clone()),
        };
        CertifyOptions { objective, solver }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub hamiltonian: HamiltonianConfig,
    pub state: StateKind,
    pub n: usize,
    /// Number of independent measurement orders `R`.
    pub realizations: usize,
    pub seed: u64,
    /// Shots per observable; `None` means exact expectations.
    pub shots: Option<u64>,
    pub delta: Option<f64>,
    pub objective: ObjectiveMode,
    pub monotone: bool,
    /// Constraint counts to evaluate; empty means `1..=4^n − 1`.
    pub k_list: Vec<usize>,
    pub allow_slow: bool,
    pub solver: SolverOptions,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            hamiltonian: HamiltonianConfig::default(),
            state: StateKind::Ghz,
            n: 3,
            realizations: 20,
            seed: 0,
            shots: None,
            delta: None,
            objective: ObjectiveMode::MinPurity,
            monotone: false,
            k_list: Vec::new(),
            allow_slow: false,
            solver: SolverOptions::default(),
        }
    }
}

pub fn check_qubits(n: usize, allow_slow: bool) -> Result<()> {
    if n < 2 {
        return Err(Error::Config("spin chains need n >= 2".into()));
    }
    if n > SLOW_MAX_QUBITS {
        return Err(Error::DimensionTooLarge {
            qubits: n,
            limit: SLOW_MAX_QUBITS,
        });
    }
    if n > DESK_MAX_QUBITS && !allow_slow {
        return Err(Error::Config(format!(
            "n = {n} needs --allow-slow (default limit is {DESK_MAX_QUBITS})"
        )));
    }
    Ok(())
}

impl SweepConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serialises")
    }

    pub fn max_k(&self) -> usize {
        (1usize << (2 * self.n)) - 1
    }

    /// Sorted, de-duplicated constraint counts.
    pub fn resolved_k_list(&self) -> Vec<usize> {
        let mut ks = if self.k_list.is_empty() {
            (1..=self.max_k()).collect()
        } else {
            self.k_list.clone()
        };
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    pub fn validate(&self) -> Result<()> {
        check_qubits(self.n, self.allow_slow)?;
        if self.realizations == 0 {
            return Err(Error::Config("realizations must be at least 1".into()));
        }
        match (self.shots, self.delta) {
            (Some(0), _) => return Err(Error::ZeroShots),
            (Some(_), Some(d)) if !(d > 0.0 && d < 1.0) => return Err(Error::InvalidDelta(d)),
            (Some(_), Some(_)) | (None, None) => {}
            _ => {
                return Err(Error::Config(
                    "shots and delta must be given together".into(),
                ))
            }
        }
        if let Some(&k) = self.k_list.iter().find(|&&k| k == 0 || k > self.max_k()) {
            return Err(Error::Config(format!(
                "K = {k} outside 1..={}",
                self.max_k()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_and_defaults() {
        let cfg = SweepConfig::from_json(r#"{"n": 2, "shots": 1000, "delta": 0.01, "state": {"kind": "w"}}"#).unwrap();
        assert_eq!(cfg.n, 2);
        assert_eq!(cfg.state, StateKind::W);
        assert_eq!(cfg.realizations, 20);
        cfg.validate().unwrap();
        assert_eq!(SweepConfig::from_json(&cfg.to_json()).unwrap(), cfg);
        assert!(SweepConfig::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn validation() {
        let ok = SweepConfig::default();
        ok.validate().unwrap();
        assert_eq!(ok.resolved_k_list().len(), 63);
        let half = SweepConfig {
            shots: Some(10),
            ..SweepConfig::default()
        };
        assert!(half.validate().is_err());
        let big = SweepConfig {
            n: 4,
            ..SweepConfig::default()
        };
        assert!(big.validate().is_err());
        assert!(SweepConfig { allow_slow: true, ..big.clone() }.validate().is_ok());
        assert!(SweepConfig { n: 6, allow_slow: true, ..big }.validate().is_err());
        let bad_k = SweepConfig {
            k_list: vec![0],
            ..SweepConfig::default()
        };
        assert!(bad_k.validate().is_err());
    }

    #[test]
    fn presets_apply() {
        let h = HamiltonianConfig {
            preset: ModelPreset::Annni,
            j1: 1.0,
            j2: -1.0,
            b: 0.5,
            g: 3.0,
            jy: 2.0,
            delta: 1.0,
        };
        let p = h.params(3);
        assert_eq!((p.g, p.jy, p.delta), (0.0, 0.0, 0.0));
        assert_eq!(p.j2, -1.0);
    }
}
