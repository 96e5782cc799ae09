//! Simulated shot data with Hoeffding intervals, certified prefix by prefix
//! while carrying the best unitary forward.

use ergocert::certification::{certify_monotone, CertifyOptions, MonotoneSession};
use ergocert::ergotropy::exact_ergotropy;
use ergocert::measurement::simulate_plan;
use ergocert::models::{build_spin_chain, make_reference_state, SpinChainParams, StateKind};
use ergocert::pauli::hierarchical_order;

pub fn run() -> ergocert::Result<()> {
    let n = 2;
    let h = build_spin_chain(&SpinChainParams::annni(n, 1.0, -1.0, 0.5))?;
    let rho = make_reference_state(StateKind::ExtremalSuperposition { s: 1.0 }, Some(&h), n)?;
    let order = hierarchical_order(n, 5);
    let plan = simulate_plan(&rho, &order, 100_000, 0.003, 9)?;
    println!("exact ergotropy {:.6}", exact_ergotropy(&rho, &h)?.value);
    println!("half-width {:.5}", plan.epsilons()?[0]);

    let mut session = MonotoneSession::new();
    for k in 1..=plan.len() {
        let spec = plan.feasible_set(k)?;
        let (next, result) = certify_monotone(session, &spec, &h, &CertifyOptions::default())?;
        session = next;
        let entry = session.history.last().expect("one entry per call");
        println!(
            "K = {k:>2}: bound {:.6}  step-(ii) {:+.6}  {}",
            result.bound,
            result.raw_min,
            if entry.unitary_updated { "new unitary" } else { "kept unitary" }
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
