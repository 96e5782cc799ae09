//! A small reproducible sweep: median and quartiles of the certified bound
//! over realizations of the hierarchical order, written as CSV.

use ergocert::harness::{run_sweep, write_sweep_csv, HamiltonianConfig, SweepConfig};
use ergocert::models::{ModelPreset, StateKind};

pub fn run() -> ergocert::Result<()> {
    let config = SweepConfig {
        hamiltonian: HamiltonianConfig {
            preset: ModelPreset::Mfi,
            b: 0.5,
            g: 0.5,
            delta: 1.0,
            ..HamiltonianConfig::default()
        },
        state: StateKind::Gibbs { beta: -1.0 },
        n: 2,
        realizations: 5,
        seed: 3,
        k_list: vec![1, 2, 4, 6, 9, 12, 15],
        ..SweepConfig::default()
    };
    let output = run_sweep(&config)?;
    write_sweep_csv(std::io::stdout().lock(), &config, &output)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
