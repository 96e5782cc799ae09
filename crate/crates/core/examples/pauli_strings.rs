//! Pauli strings: parsing, dense matrices, decomposition of a Hamiltonian and
//! the weight-ordered random measurement order.

use ergocert::models::SpinChainParams;
use ergocert::pauli::{hierarchical_order, parse_pauli, pauli_decompose, pauli_matrix};

pub fn run() -> ergocert::Result<()> {
    let p = parse_pauli("XZY")?;
    let m = pauli_matrix(&p)?;
    println!("{p}: weight {}, dimension {}", p.weight(), m.nrows());
    // site 1 is the leftmost letter and the most significant tensor factor
    println!("<101| XZY |000> = {}", m[(5, 0)]);

    let params = SpinChainParams::annni(3, 1.0, -1.0, 0.5);
    let decomposition = pauli_decompose(&params.matrix()?)?;
    println!("ANNNI terms:");
    for (p, h) in &decomposition.terms {
        println!("  {h:+.3} {p}");
    }

    let order = hierarchical_order(2, 7);
    let labels: Vec<String> = order.iter().map(|p| p.to_string()).collect();
    println!("hierarchical order, n = 2, seed 7: {}", labels.join(" "));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
