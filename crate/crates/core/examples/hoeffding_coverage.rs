//! Hoeffding half-widths and a Monte-Carlo check that all intervals cover the
//! true expectations at least as often as promised.

use ergocert::measurement::{coverage_rate, hoeffding_epsilon, simulate_plan};
use ergocert::models::{build_spin_chain, make_reference_state, SpinChainParams, StateKind};
use ergocert::pauli::hierarchical_order;

pub fn run() -> ergocert::Result<()> {
    let eps = hoeffding_epsilon(1 << 14, 60, 0.003)?;
    println!("N = 2^14, K = 60, delta = 0.003: epsilon = {eps:.6}");

    let n = 2;
    let h = build_spin_chain(&SpinChainParams::xxz(n, 1.0, 0.5, 0.0))?;
    let rho = make_reference_state(StateKind::W, Some(&h), n)?;
    let strings = &hierarchical_order(n, 1)[..10];
    for delta in [0.01, 0.05, 0.1] {
        let plan = simulate_plan(&rho, strings, 1000, delta, 3)?;
        let rate = coverage_rate(&rho, &plan, 500, 4)?;
        println!("delta {delta}: violation rate {rate:.3} over 500 experiments");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
