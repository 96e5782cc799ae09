use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::hoeffding_epsilon;
use crate::certification::{FeasibleSetSpec, Provenance};
use crate::error::{Error, Result};
use crate::pauli::{parse_pauli, PauliString};

/// Allowed distance of `N·estimate + N` from an even integer.
pub const LATTICE_TOL: f64 = 1e-6;
const ESTIMATE_TOL: f64 = 1e-12;

/// Empirical expectation of one Pauli string from `shots` ±1 outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotRecord {
    pub pauli: PauliString,
    pub shots: u64,
    pub estimate: f64,
}

impl ShotRecord {
    /// Distance of `N·estimate + N = 2N₊` from the nearest even integer.
    pub fn lattice_deviation(&self) -> f64 {
        let twice_plus = self.shots as f64 * (self.estimate + 1.0);
        let half = twice_plus / 2.0;
        2.0 * (half - half.round()).abs()
    }
}

/// Ordered records sharing one confidence parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    records: Vec<ShotRecord>,
    delta: f64,
}

impl ExperimentPlan {
    pub fn new(records: Vec<ShotRecord>, delta: f64) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyInput);
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidDelta(delta));
        }
        let n = records[0].pauli.num_qubits();
        for r in &records {
            if r.pauli.num_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.pauli.num_qubits(),
                });
            }
            if r.shots == 0 {
                return Err(Error::ZeroShots);
            }
            if !(r.estimate.abs() <= 1.0 + ESTIMATE_TOL) {
                return Err(Error::Config(format!(
                    "estimate {} for {} lies outside [-1, 1]",
                    r.estimate, r.pauli
                )));
            }
        }
        Ok(Self { records, delta })
    }

    pub fn records(&self) -> &[ShotRecord] {
        &self.records
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidDelta(delta));
        }
        self.delta = delta;
        Ok(self)
    }

    /// Record count `K`.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn num_qubits(&self) -> usize {
        self.records[0].pauli.num_qubits()
    }

    /// Per-record half-widths under a union bound over all `K` records.
    pub fn epsilons(&self) -> Result<Vec<f64>> {
        let k = self.len();
        self.records
            .iter()
            .map(|r| hoeffding_epsilon(r.shots, k, self.delta))
            .collect()
    }

    /// Feasible set from the first `k` records, with plan-wide half-widths.
    pub fn feasible_set(&self, k: usize) -> Result<FeasibleSetSpec> {
        let eps = self.epsilons()?;
        let mut spec = FeasibleSetSpec::new(1 << self.num_qubits(), Provenance::Estimated);
        for (r, e) in self.records.iter().zip(eps).take(k) {
            spec.push_pauli(&r.pauli, r.estimate.clamp(-1.0, 1.0), e)?;
        }
        Ok(spec)
    }

    fn warn_off_lattice(&self) {
        for (i, r) in self.records.iter().enumerate() {
            let dev = r.lattice_deviation();
            if dev > LATTICE_TOL {
                log::warn!(
                    "record {} ({}): estimate {} is not of the form 2k/{} - 1 (off by {dev:.2e})",
                    i + 1,
                    r.pauli,
                    r.estimate,
                    r.shots
                );
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct RawRecord {
    pauli: String,
    estimate: f64,
    shots: u64,
}

#[derive(Debug, Deserialize)]
struct RawPlan {
    #[serde(default)]
    delta: Option<f64>,
    records: Vec<RawRecord>,
}

fn to_record(raw: RawRecord) -> Result<ShotRecord> {
    Ok(ShotRecord {
        pauli: parse_pauli(raw.pauli.trim())?,
        shots: raw.shots,
        estimate: raw.estimate,
    })
}

fn finish(records: Vec<ShotRecord>, header_delta: Option<f64>, delta_override: Option<f64>) -> Result<ExperimentPlan> {
    let delta = delta_override.or(header_delta).ok_or_else(|| {
        Error::Config("no delta in the record file and none given".into())
    })?;
    let plan = ExperimentPlan::new(records, delta)?;
    plan.warn_off_lattice();
    Ok(plan)
}

/// Parses `pauli,estimate,shots` CSV. Lines starting with `#` are comments;
/// a comment of the form `# delta = 0.003` sets the confidence parameter.
pub fn parse_records_csv(text: &str, delta_override: Option<f64>) -> Result<ExperimentPlan> {
    let mut header_delta = None;
    for (i, line) in text.lines().enumerate() {
        let Some(comment) = line.trim_start().strip_prefix('#') else {
            continue;
        };
        if let Some((key, value)) = comment.split_once('=') {
            if key.trim() == "delta" {
                header_delta = Some(value.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line: i + 1,
                    message: format!("bad delta {:?}", value.trim()),
                })?);
            }
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let expected = ["pauli", "estimate", "shots"];
    if headers.len() != 3 || headers.iter().zip(expected).any(|(h, e)| h != e) {
        let line = text
            .lines()
            .position(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map_or(1, |i| i + 1);
        return Err(Error::Parse {
            line,
            message: if headers.is_empty() {
                "missing header `pauli,estimate,shots`".into()
            } else {
                format!("expected header `pauli,estimate,shots`, found {:?}", headers.iter().collect::<Vec<_>>().join(","))
            },
        });
    }
    let mut records = Vec::new();
    for row in reader.deserialize::<RawRecord>() {
        let raw = row.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            message: e.to_string(),
        })?;
        records.push(to_record(raw)?);
    }
    if records.is_empty() {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: "no records".into(),
        });
    }
    finish(records, header_delta, delta_override)
}

/// Parses `{"delta": …, "records": [{"pauli", "estimate", "shots"}, …]}`.
pub fn parse_records_json(text: &str, delta_override: Option<f64>) -> Result<ExperimentPlan> {
    let raw: RawPlan = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    if raw.records.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "no records".into(),
        });
    }
    let records = raw.records.into_iter().map(to_record).collect::<Result<Vec<_>>>()?;
    finish(records, raw.delta, delta_override)
}

/// Reads a record file; `.json` files use the JSON layout, anything else CSV.
pub fn load_records(path: &Path, delta_override: Option<f64>) -> Result<ExperimentPlan> {
    let mut text = String::new();
    std::fs::File::open(path)?.read_to_string(&mut text)?;
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        parse_records_json(&text, delta_override)
    } else {
        parse_records_csv(&text, delta_override)
    }
}

/// Writes records in the CSV layout read by [`parse_records_csv`].
pub fn write_records_csv<W: std::io::Write>(mut out: W, plan: &ExperimentPlan, comments: &[String]) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "# delta={}", plan.delta)?;
    let mut w = csv::Writer::from_writer(out);
    for r in &plan.records {
        w.serialize(RawRecord {
            pauli: r.pauli.to_string(),
            estimate: r.estimate,
            shots: r.shots,
        })
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
