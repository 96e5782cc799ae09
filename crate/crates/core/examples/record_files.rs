//! Round trip through the record-file format and the prefix-by-prefix
//! certification pipeline used for fixed-order experimental data.

use ergocert::certification::CertifyOptions;
use ergocert::harness::{run_certify_file, write_certify_file_csv};
use ergocert::measurement::{parse_records_csv, simulate_plan, write_records_csv};
use ergocert::models::{build_spin_chain, make_reference_state, SpinChainParams, StateKind};
use ergocert::pauli::parse_pauli;

pub fn run() -> ergocert::Result<()> {
    let n = 2;
    let h = build_spin_chain(&SpinChainParams::xxz(n, 1.0, 0.5, 0.0))?;
    let rho = make_reference_state(StateKind::Ghz, Some(&h), n)?;
    let strings = ["XX", "ZZ", "YY", "XX", "ZI", "IZ", "XY", "YX"]
        .iter()
        .map(|s| parse_pauli(s))
        .collect::<ergocert::Result<Vec<_>>>()?;
    let plan = simulate_plan(&rho, &strings, 1 << 14, 0.003, 11)?;

    let mut file = Vec::new();
    write_records_csv(&mut file, &plan, &["synthetic two-qubit GHZ data".to_string()])?;
    let text = String::from_utf8(file).expect("utf-8");
    print!("{text}");
    let parsed = parse_records_csv(&text, None)?;
    assert_eq!(parsed, plan);

    let out = run_certify_file(&parsed, &h, &CertifyOptions::default(), true)?;
    let mut csv = Vec::new();
    write_certify_file_csv(&mut csv, &[], &out)?;
    print!("{}", String::from_utf8(csv).expect("utf-8"));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
