//! The dense SDP solver on its own: a linear objective, the least pure state
//! compatible with two qubit expectations, and an infeasible set.

use ergocert::linalg::{c, CMatrix};
use ergocert::pauli::{parse_pauli, pauli_matrix};
use ergocert::sdp::{min_interval_inflation, solve_linear, solve_min_purity, SdpProblem, SolverOptions};

pub fn run() -> ergocert::Result<()> {
    let opts = SolverOptions::default();
    let x = pauli_matrix(&parse_pauli("X")?)?;
    let z = pauli_matrix(&parse_pauli("Z")?)?;

    let ground = solve_linear(&SdpProblem::states(2).with_objective(z.clone()), &opts)?;
    println!("min <Z> over qubit states: {:.9} ({:?})", ground.objective_value, ground.status);

    let problem = SdpProblem::states(2).equality(x.clone(), 0.6).equality(z.clone(), -0.3);
    let least_pure = solve_min_purity(&problem, &opts)?;
    let y = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
    let bloch = [&x, &y, &z].map(|p| ergocert::linalg::trace_product_re(p, &least_pure.x));
    println!("least pure state: purity {:.9}, Bloch vector {bloch:.6?}", least_pure.objective_value);

    let infeasible = SdpProblem::states(2).interval(x, 0.9, 1.0).interval(z, 0.9, 1.0);
    let sol = solve_linear(&infeasible, &opts)?;
    let widen = min_interval_inflation(&infeasible, &opts)?;
    println!("<X>, <Z> >= 0.9: {:?}; smallest uniform widening {widen:?}", sol.status);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
