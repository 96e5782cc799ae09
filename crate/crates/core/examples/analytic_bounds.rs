//! Closed-form bounds: populations-only data, and a qubit with known
//! `<X>` and `<Z>`, checked against the SDP protocol and the grid oracle.

use ergocert::analytic::{energy_basis_bound, QubitXzInput};
use ergocert::harness::run_qubit_comparison;

pub fn run() -> ergocert::Result<()> {
    let p = [0.1, 0.2, 0.3, 0.4];
    let energies = [0.0, 1.0, 1.5, 3.0];
    println!("populations {p:?} on levels {energies:?}: bound {:.6}", energy_basis_bound(&p, &energies)?);

    println!("{:>6} {:>6} {:>10} {:>10} {:>10} {:>10}", "x", "z", "closed", "gain", "two-step", "oracle");
    for (x, z) in [(0.0, 0.3), (0.3, 0.3), (0.6, -0.2), (0.9, 0.0), (-0.6, -0.2)] {
        let input = QubitXzInput::new(x, z, (-0.5, 1.0))?;
        let cmp = run_qubit_comparison(&input, 2001, &Default::default())?;
        println!(
            "{x:>6.2} {z:>6.2} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            cmp.closed_form, cmp.coherent_gain, cmp.two_step, cmp.oracle
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
