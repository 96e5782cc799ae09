//! Experiment pipelines behind the command-line tool: parameter sweeps over
//! the constraint count, certification of recorded data, and analytic
//! comparisons. Every pipeline writes CSV preceded by `#` provenance lines.

pub mod compare;
pub mod config;
pub mod files;
pub mod sweep;

pub use compare::{run_energy_comparison, run_qubit_comparison, write_energy_comparison_csv, EnergyComparisonRow, QubitComparison};
pub use config::{check_qubits, HamiltonianConfig, ObjectiveMode, SweepConfig, DESK_MAX_QUBITS, SLOW_MAX_QUBITS};
pub use files::{run_certify_file, write_certify_file_csv, CertifyFileOutput, CertifyFileRow};
pub use sweep::{realization_seed, run_sweep, write_sweep_csv, RealizationTrace, SweepOutput, SweepRow};

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

pub const CSV_SCHEMA: u32 = 1;

pub fn version_string() -> String {
    match option_env!("ERGOCERT_GIT_DESCRIBE") {
        Some(describe) => format!("ergocert {} ({describe})", env!("CARGO_PKG_VERSION")),
        None => format!("ergocert {}", env!("CARGO_PKG_VERSION")),
    }
}

/// Median and quartiles of `values`.
///
/// Quantile `q` of the sorted sample `v₀ ≤ … ≤ v_{n−1}` is the linear
/// interpolation at position `h = (n − 1)q` between `v_⌊h⌋` and `v_⌈h⌉`.
pub fn aggregate_median_iqr(values: &[f64]) -> Result<(f64, f64, f64)> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let quantile = |q: f64| {
        let h = (v.len() - 1) as f64 * q;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        v[lo] + (h - lo as f64) * (v[hi] - v[lo])
    };
    Ok((quantile(0.5), quantile(0.25), quantile(0.75)))
}

pub(crate) fn write_provenance<W: Write>(out: &mut W, lines: &[String]) -> Result<()> {
    writeln!(out, "# schema={CSV_SCHEMA}")?;
    writeln!(out, "# version={}", version_string())?;
    for line in lines {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

pub(crate) fn write_rows<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}
