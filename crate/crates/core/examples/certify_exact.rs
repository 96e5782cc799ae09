//! Two-step certification from exact expectations of the first K strings of
//! a hierarchical order, for a GHZ state on a three-site XXZ chain.

use ergocert::certification::{certify, CertifyOptions, FeasibleSetSpec};
use ergocert::ergotropy::exact_ergotropy;
use ergocert::models::{build_spin_chain, make_reference_state, SpinChainParams, StateKind};
use ergocert::pauli::hierarchical_order;

pub fn run() -> ergocert::Result<()> {
    let n = 3;
    let h = build_spin_chain(&SpinChainParams::xxz(n, 1.0, 0.5, 0.0))?;
    let rho = make_reference_state(StateKind::Ghz, Some(&h), n)?;
    let exact = exact_ergotropy(&rho, &h)?.value;
    let order = hierarchical_order(n, 42);
    println!("exact ergotropy {exact:.6}");
    println!("{:>3} {:>10} {:>10} {:>8}", "K", "bound", "raw", "purity");
    for k in [3, 9, 18, 27, 36, 45, 54, 63] {
        let spec = FeasibleSetSpec::exact_from_state(&rho, &order[..k])?;
        let r = certify(&spec, &h, &CertifyOptions::default())?;
        println!(
            "{k:>3} {:>10.6} {:>10.6} {:>8.4}",
            r.bound,
            r.raw_min,
            r.step1_state.purity()
        );
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
