//! Two-step certification of a lower bound on ergotropy.
//!
//! Step (i) picks a representative state `ρ̃` of the feasible set (by default
//! the least pure one), whose optimal unitary `Ũ⋆` is then held fixed. Step
//! (ii) minimises the energy extracted by `Ũ⋆` over the whole set, which is a
//! linear SDP. Since every state of the set yields at least that much with
//! `Ũ⋆`, the minimum (clamped at zero) lower-bounds the ergotropy of the true
//! state.

mod feasible;
mod monotone;
mod oracle;
mod protocol;

pub use feasible::{Constraint, FeasibleSetSpec, Provenance};
pub use monotone::{certify_monotone, HistoryEntry, MonotoneSession};
pub use oracle::{qubit_minimax_oracle, MAX_GRID_POINTS};
pub use protocol::{
    build_tilde_unitary, certify, step_one_select_state, step_two_bound, CertificationResult,
    CertifyOptions, Diagnostics, SolveReport, StepOneObjective, RHO_DEGENERACY_TOL,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ergotropy::{dephase_incoherent, exact_ergotropy, extraction_value};
    use crate::error::Error;
    use crate::linalg::{max_abs_diff, CMatrix};
    use crate::models::{build_spin_chain, make_reference_state, DensityMatrix, HamiltonianData, SpinChainParams, StateKind};
    use crate::pauli::{parse_pauli, PauliString};
    use crate::random::{random_density, random_hermitian, random_pure_density};
    use crate::sdp::SolverOptions;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn all_strings(n: usize) -> Vec<PauliString> {
        (1..4usize.pow(n as u32)).map(|i| PauliString::from_index(n, i)).collect()
    }

    fn opts() -> CertifyOptions {
        CertifyOptions::default()
    }

    fn sigma_z() -> HamiltonianData {
        HamiltonianData::diagonal(&[-1.0, 1.0]).unwrap()
    }

    #[test]
    fn unconstrained_qubit_selects_maximally_mixed() {
        let spec = FeasibleSetSpec::new(2, Provenance::Exact);
        let rho = step_one_select_state(&spec, &StepOneObjective::MinPurity, &SolverOptions::default()).unwrap();
        assert!(max_abs_diff(rho.matrix(), &CMatrix::identity(2, 2).unscale(2.0)) < 1e-6);
    }

    #[test]
    fn qubit_step_one_midpoint() {
        let mut spec = FeasibleSetSpec::new(2, Provenance::Exact);
        spec.push_pauli(&parse_pauli("X").unwrap(), 0.4, 0.0).unwrap();
        spec.push_pauli(&parse_pauli("Z").unwrap(), -0.7, 0.0).unwrap();
        let rho = step_one_select_state(&spec, &StepOneObjective::MinPurity, &SolverOptions::default()).unwrap();
        let y = crate::pauli::expectation(rho.matrix(), &parse_pauli("Y").unwrap()).unwrap();
        assert!(y.abs() < 1e-6);
        assert!(spec.contains(rho.matrix(), 1e-7));
    }

    #[test]
    fn complete_information_recovers_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in [1, 2] {
            let rho = DensityMatrix::new(random_density(1 << n, &mut rng)).unwrap();
            let spec = FeasibleSetSpec::exact_from_state(&rho, &all_strings(n)).unwrap();
            let picked = step_one_select_state(&spec, &StepOneObjective::MinPurity, &SolverOptions::default()).unwrap();
            assert!(max_abs_diff(picked.matrix(), rho.matrix()) < 1e-5);
        }
    }

    #[test]
    fn tilde_unitary_cases() {
        let h = build_spin_chain(&SpinChainParams::xxz(2, 1.0, 0.5, 0.3)).unwrap();
        let ground = DensityMatrix::new(h.projector(0)).unwrap();
        let u = build_tilde_unitary(&ground, &h).unwrap();
        assert!(extraction_value(&ground, &h, &u).unwrap().abs() < 1e-10);

        let mixed = DensityMatrix::maximally_mixed(4);
        let u = build_tilde_unitary(&mixed, &h).unwrap();
        assert!(crate::linalg::unitarity_deviation(&u) < 1e-9);
        assert!(extraction_value(&mixed, &h, &u).unwrap().abs() < 1e-10);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = DensityMatrix::new(random_density(4, &mut rng)).unwrap();
        let u = build_tilde_unitary(&rho, &h).unwrap();
        let exact = exact_ergotropy(&rho, &h).unwrap().value;
        assert!((extraction_value(&rho, &h, &u).unwrap() - exact).abs() < 1e-8);
    }

    #[test]
    fn step_two_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = HamiltonianData::from_matrix(random_hermitian(4, &mut rng)).unwrap();
        let rho = DensityMatrix::new(random_density(4, &mut rng)).unwrap();
        let spec = FeasibleSetSpec::exact_from_state(&rho, &all_strings(2)).unwrap();
        let u = build_tilde_unitary(&rho, &h).unwrap();
        let raw = step_two_bound(&spec, &h, &u, &SolverOptions::default()).unwrap();
        assert!((raw - exact_ergotropy(&rho, &h).unwrap().value).abs() < 1e-6);

        let partial = spec.prefix(4);
        let raw = step_two_bound(&partial, &h, &CMatrix::identity(4, 4), &SolverOptions::default()).unwrap();
        assert!(raw.abs() < 1e-7);

        let mut zspec = FeasibleSetSpec::new(2, Provenance::Exact);
        zspec.push_pauli(&parse_pauli("Z").unwrap(), 0.0, 0.0).unwrap();
        for _ in 0..5 {
            let u = crate::random::haar_unitary(2, &mut rng);
            let raw = step_two_bound(&zspec, &sigma_z(), &u, &SolverOptions::default()).unwrap();
            assert!(raw <= 1e-7);
        }
    }

    #[test]
    fn unitary_must_be_unitary() {
        let spec = FeasibleSetSpec::new(2, Provenance::Exact);
        let not_u = CMatrix::identity(2, 2) * crate::linalg::c(2.0, 0.0);
        assert!(matches!(
            step_two_bound(&spec, &sigma_z(), &not_u, &SolverOptions::default()),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn clamp_on_uninformative_data() {
        let mut spec = FeasibleSetSpec::new(2, Provenance::Exact);
        spec.push_pauli(&parse_pauli("Z").unwrap(), 0.0, 0.0).unwrap();
        let r = certify(&spec, &sigma_z(), &opts()).unwrap();
        assert_eq!(r.bound, 0.0);
        assert!(r.raw_min <= 1e-7);
    }

    #[test]
    fn ghz_complete_information() {
        let h = build_spin_chain(&SpinChainParams::xxz(3, 1.0, 0.5, 0.0)).unwrap();
        let rho = make_reference_state(StateKind::Ghz, Some(&h), 3).unwrap();
        let spec = FeasibleSetSpec::exact_from_state(&rho, &all_strings(3)).unwrap();
        let r = certify(&spec, &h, &opts()).unwrap();
        let exact = exact_ergotropy(&rho, &h).unwrap().value;
        assert!((r.bound - exact).abs() < 1e-5, "bound {} exact {}", r.bound, exact);
    }

    #[test]
    fn energy_projectors_give_incoherent_ergotropy() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in [2, 3, 4] {
            let h = HamiltonianData::from_matrix(random_hermitian(d, &mut rng)).unwrap();
            let rho = DensityMatrix::new(random_pure_density(d, &mut rng)).unwrap();
            let mut spec = FeasibleSetSpec::new(d, Provenance::Exact);
            for j in 0..d {
                let p = h.projector(j);
                let v = crate::linalg::trace_product_re(&p, rho.matrix());
                spec.push(p, v, 0.0).unwrap();
            }
            let r = certify(&spec, &h, &opts()).unwrap();
            let (_, incoherent) = dephase_incoherent(&rho, &h).unwrap();
            assert!((r.bound - incoherent).abs() < 1e-6, "d={d}: {} vs {}", r.bound, incoherent);
        }
    }

    #[test]
    fn infeasible_data_reports_advice() {
        let mut spec = FeasibleSetSpec::new(2, Provenance::Estimated);
        spec.push_pauli(&parse_pauli("X").unwrap(), 0.85, 0.05).unwrap();
        spec.push_pauli(&parse_pauli("Z").unwrap(), 0.85, 0.05).unwrap();
        match certify(&spec, &sigma_z(), &opts()) {
            Err(Error::InfeasibleSet { advice_epsilon: Some(t) }) => {
                assert!((t - (0.8 - std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-6);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn soundness_on_random_partial_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for trial in 0..12 {
            let h = build_spin_chain(&SpinChainParams::annni(2, 1.0, 0.0, 0.7)).unwrap();
            let rho = DensityMatrix::new(if trial % 2 == 0 {
                random_pure_density(4, &mut rng)
            } else {
                random_density(4, &mut rng)
            })
            .unwrap();
            let k = rng.random_range(1..16);
            let strings: Vec<_> = all_strings(2).into_iter().take(k).collect();
            let mut spec = FeasibleSetSpec::new(4, Provenance::Estimated);
            for p in &strings {
                let v = crate::pauli::expectation(rho.matrix(), p).unwrap();
                spec.push_pauli(p, v, 0.05).unwrap();
            }
            let r = certify(&spec, &h, &opts()).unwrap();
            let exact = exact_ergotropy(&rho, &h).unwrap().value;
            assert!(r.bound <= exact + 1e-6, "trial {trial}");
            assert!(r.bound >= 0.0);
        }
    }

    #[test]
    fn monotone_session_on_nested_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let h = HamiltonianData::from_matrix(random_hermitian(4, &mut rng)).unwrap();
        let rho = DensityMatrix::new(random_pure_density(4, &mut rng)).unwrap();
        let full = FeasibleSetSpec::exact_from_state(&rho, &all_strings(2)).unwrap();
        let mut session = MonotoneSession::new();
        let first = certify(&full.prefix(1), &h, &opts()).unwrap();
        for k in 1..=15 {
            let (s, r) = certify_monotone(session, &full.prefix(k), &h, &opts()).unwrap();
            if k == 1 {
                assert_eq!(r.bound, first.bound);
            }
            session = s;
        }
        let bounds = session.bounds();
        assert!(bounds.windows(2).all(|w| w[1] >= w[0] - 1e-9));
        let exact = exact_ergotropy(&rho, &h).unwrap().value;
        assert!((bounds[14] - exact).abs() < 1e-5);
        assert_eq!(
            certify_monotone(session, &full.prefix(3), &h, &opts()).unwrap_err(),
            Error::NonNestedConstraints
        );
    }

    #[test]
    fn oracle_dominates_two_step_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..30 {
            let h = HamiltonianData::from_matrix(random_hermitian(2, &mut rng)).unwrap();
            let rho = DensityMatrix::new(random_density(2, &mut rng)).unwrap();
            let mut spec = FeasibleSetSpec::new(2, Provenance::Estimated);
            for s in ["X", "Z"] {
                let p = parse_pauli(s).unwrap();
                let v = crate::pauli::expectation(rho.matrix(), &p).unwrap();
                spec.push_pauli(&p, v, rng.random_range(0.0..0.2)).unwrap();
            }
            let r = certify(&spec, &h, &opts()).unwrap();
            let resolution = 61;
            let oracle = qubit_minimax_oracle(&spec, &h, resolution).unwrap();
            assert!(r.bound <= oracle + 1e-6, "{} > {}", r.bound, oracle);
        }
    }
}
