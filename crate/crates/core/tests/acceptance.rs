//! Acceptance checks. One PASS/FAIL line per criterion; exits non-zero if any
//! criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use ergocert::analytic::{energy_basis_bound, QubitXzInput};
use ergocert::certification::{
    build_tilde_unitary, certify, certify_monotone, step_one_select_state, step_two_bound, CertifyOptions,
    FeasibleSetSpec, MonotoneSession, Provenance, StepOneObjective,
};
use ergocert::ergotropy::{dephase_incoherent, exact_ergotropy, extraction_value};
use ergocert::harness::{run_qubit_comparison, run_sweep, HamiltonianConfig, SweepConfig, SweepOutput};
use ergocert::linalg::{diag_real, CMatrix};
use ergocert::measurement::{coverage_rate, hoeffding_epsilon, simulate_plan};
use ergocert::models::{make_reference_state, DensityMatrix, HamiltonianData, ModelPreset, StateKind};
use ergocert::pauli::{expectation, hierarchical_order, parse_pauli};
use ergocert::random::{derive_seed, haar_unitary, random_density, random_energies, random_hermitian, random_probability};
use ergocert::sdp::{solve_min_purity, SolverOptions};
use ergocert::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

fn xxz() -> HamiltonianConfig {
    HamiltonianConfig {
        preset: ModelPreset::Xxz,
        j1: 1.0,
        jy: 1.0,
        delta: 0.5,
        ..HamiltonianConfig::default()
    }
}

fn mfi() -> HamiltonianConfig {
    HamiltonianConfig {
        preset: ModelPreset::Mfi,
        b: 0.5,
        g: 0.5,
        delta: 1.0,
        ..HamiltonianConfig::default()
    }
}

fn annni() -> HamiltonianConfig {
    HamiltonianConfig {
        preset: ModelPreset::Annni,
        j1: 1.0,
        j2: -1.0,
        b: 0.5,
        ..HamiltonianConfig::default()
    }
}

fn states() -> [StateKind; 5] {
    [
        StateKind::Ghz,
        StateKind::W,
        StateKind::Product,
        StateKind::Gibbs { beta: -1.0 },
        StateKind::ExtremalSuperposition { s: 1.0 },
    ]
}

fn c1_oracle_dominance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_gap = f64::INFINITY;
    let mut worst_eq = 0.0_f64;
    for case in 0..200 {
        let d = [2, 4, 8][case % 3];
        let h = HamiltonianData::from_matrix(random_hermitian(d, &mut rng)).map_err(e2s)?;
        let rho = DensityMatrix::new(random_density(d, &mut rng)).map_err(e2s)?;
        let report = exact_ergotropy(&rho, &h).map_err(e2s)?;
        let at_star = extraction_value(&rho, &h, &report.optimal_unitary).map_err(e2s)?;
        worst_eq = worst_eq.max((at_star - report.value).abs());
        for _ in 0..10_000 {
            let u = haar_unitary(d, &mut rng);
            let w = extraction_value(&rho, &h, &u).map_err(e2s)?;
            worst_gap = worst_gap.min(report.value - w);
        }
    }
    ensure(worst_gap >= -1e-9, || format!("a Haar unitary beat the closed form by {:.3e}", -worst_gap))?;
    ensure(worst_eq <= 1e-9, || format!("closed form differs from U* extraction by {worst_eq:.3e}"))?;
    Ok(format!("min margin {worst_gap:.3e}, U* mismatch {worst_eq:.1e}"))
}

fn exact_sweep(h: HamiltonianConfig, state: StateKind, n: usize, k_list: Vec<usize>, realizations: usize, seed: u64) -> ergocert::Result<SweepOutput> {
    run_sweep(&SweepConfig {
        hamiltonian: h,
        state,
        n,
        realizations,
        seed,
        k_list,
        ..SweepConfig::default()
    })
}

fn c2_soundness() -> Check {
    let mut certified = 0usize;
    let mut worst = f64::NEG_INFINITY;
    let mut skipped = Vec::new();
    for (name, h) in [("xxz", xxz()), ("mfi", mfi()), ("annni", annni())] {
        for n in [2, 3] {
            let full = (1usize << (2 * n)) - 1;
            let k_list: Vec<usize> = (1..=full).collect();
            for state in states() {
                let out = match exact_sweep(h.clone(), state, n, k_list.clone(), 3, 17) {
                    Ok(out) => out,
                    Err(Error::DegenerateExtremalLevels(_)) => {
                        skipped.push(format!("{name} n={n} {}", state.label()));
                        continue;
                    }
                    Err(e) => return Err(format!("{name} n={n} {}: {e}", state.label())),
                };
                for t in &out.realizations {
                    for (&b, &k) in t.bounds.iter().zip(&out.k_list) {
                        certified += 1;
                        worst = worst.max(b - out.exact);
                        ensure(b <= out.exact + 1e-6, || {
                            format!("{name} n={n} {} K={k}: bound {b} > exact {}", state.label(), out.exact)
                        })?;
                    }
                }
            }
        }
    }
    let note = if skipped.is_empty() {
        String::new()
    } else {
        format!("; undefined states skipped: {}", skipped.join(", "))
    };
    Ok(format!("{certified} bounds, max excess {worst:.2e}{note}"))
}

fn c3_completeness() -> Check {
    let mut worst = 0.0_f64;
    let mut cases = 0;
    for (name, h) in [("xxz", xxz()), ("mfi", mfi()), ("annni", annni())] {
        for n in [2, 3] {
            let full = (1usize << (2 * n)) - 1;
            for state in states() {
                let out = match exact_sweep(h.clone(), state, n, vec![full], 1, 5) {
                    Ok(out) => out,
                    Err(Error::DegenerateExtremalLevels(_)) => continue,
                    Err(e) => return Err(format!("{name} n={n} {}: {e}", state.label())),
                };
                let gap = (out.rows[0].median - out.exact).abs();
                cases += 1;
                worst = worst.max(gap);
                ensure(gap <= 1e-5, || format!("{name} n={n} {}: |bound - exact| = {gap:.3e}", state.label()))?;
            }
        }
    }
    Ok(format!("{cases} cases, max deviation {worst:.2e}"))
}

fn c4_monotone() -> Check {
    let mut steps = 0;
    for chain in 0..20u64 {
        let seed = derive_seed(400, &[chain]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = HamiltonianData::from_matrix(random_hermitian(4, &mut rng)).map_err(e2s)?;
        let rho = DensityMatrix::new(random_density(4, &mut rng)).map_err(e2s)?;
        let order = hierarchical_order(2, seed);
        let plan = simulate_plan(&rho, &order, 2000, 0.05, derive_seed(seed, &[1])).map_err(e2s)?;
        let mut session = MonotoneSession::new();
        let mut previous = f64::NEG_INFINITY;
        for k in 1..=15 {
            let spec = plan.feasible_set(k).map_err(e2s)?;
            let (s, res) =
                certify_monotone(session, &spec, &h, &CertifyOptions::default()).map_err(|e| format!("chain {chain}, K={k}: {e}"))?;
            session = s;
            ensure(res.bound >= previous - 1e-9, || format!("chain {chain}: {} after {previous} at K={k}", res.bound))?;
            previous = res.bound;
            steps += 1;
        }
    }
    Ok(format!("20 chains, {steps} steps"))
}

fn c5_population_bound() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_sdp, mut worst_inc) = (0.0_f64, 0.0_f64);
    for case in 0..100 {
        let d = 2 + case % 5;
        let p = random_probability(d, &mut rng);
        let energies = random_energies(d, &mut rng);
        let v = haar_unitary(d, &mut rng);
        let diag = diag_real(&energies);
        let h = HamiltonianData::from_matrix(&v * diag * v.adjoint()).map_err(e2s)?;
        let mut spec = FeasibleSetSpec::new(d, Provenance::Exact);
        let mut rho = CMatrix::zeros(d, d);
        for (j, &pj) in p.iter().enumerate() {
            let proj = h.projector(j);
            rho += &proj * num_complex::Complex64::from(pj);
            spec.push(proj, pj, 0.0).map_err(e2s)?;
        }
        let rho = DensityMatrix::new(rho).map_err(e2s)?;
        let closed = energy_basis_bound(&p, h.energies()).map_err(e2s)?;
        let two_step = certify(&spec, &h, &CertifyOptions::default()).map_err(|e| format!("case {case}: {e}"))?.bound;
        let incoherent = dephase_incoherent(&rho, &h).map_err(e2s)?.1;
        worst_sdp = worst_sdp.max((two_step - closed).abs());
        worst_inc = worst_inc.max((closed - incoherent).abs());
        ensure((two_step - closed).abs() <= 1e-6, || format!("case {case} (d={d}): two-step {two_step} vs {closed}"))?;
        ensure((closed - incoherent).abs() <= 1e-9, || format!("case {case} (d={d}): {closed} vs incoherent {incoherent}"))?;
    }
    Ok(format!("two-step gap {worst_sdp:.1e}, incoherent gap {worst_inc:.1e}"))
}

fn c6_qubit() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst_sdp, mut worst_grid) = (0.0_f64, 0.0_f64);
    for case in 0..50 {
        let (r, phi): (f64, f64) = (rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU));
        let e0 = rng.random_range(-1.0..1.0);
        let e1 = e0 + rng.random_range(0.05..2.0);
        let input = QubitXzInput::new(r * phi.cos(), r * phi.sin(), (e0, e1)).map_err(e2s)?;
        let c = run_qubit_comparison(&input, 2001, &CertifyOptions::default()).map_err(|e| format!("case {case}: {e}"))?;
        worst_sdp = worst_sdp.max((c.closed_form - c.two_step).abs());
        worst_grid = worst_grid.max((c.closed_form - c.oracle).abs());
        ensure((c.closed_form - c.two_step).abs() <= 1e-6, || format!("case {case}: {c:?}"))?;
        ensure((c.closed_form - c.oracle).abs() <= 1e-3, || format!("case {case}: {c:?}"))?;
    }
    Ok(format!("SDP gap {worst_sdp:.1e}, grid gap {worst_grid:.1e}"))
}

fn c7_purity() -> Check {
    let mut worst = 0.0_f64;
    for d in [2, 4, 8, 16] {
        let sol = solve_min_purity(&FeasibleSetSpec::new(d, Provenance::Exact).to_sdp_problem(), &SolverOptions::default())
            .map_err(e2s)?;
        let purity = (&sol.x * &sol.x).trace().re;
        worst = worst.max((purity - 1.0 / d as f64).abs());
        ensure((purity - 1.0 / d as f64).abs() <= 1e-6, || format!("d={d}: purity {purity}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_bloch = 0.0_f64;
    let (px, py, pz) = (parse_pauli("X").map_err(e2s)?, parse_pauli("Y").map_err(e2s)?, parse_pauli("Z").map_err(e2s)?);
    for _ in 0..20 {
        let (r, phi): (f64, f64) = (rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU));
        let (x, z) = (r * phi.cos(), r * phi.sin());
        let mut spec = FeasibleSetSpec::new(2, Provenance::Exact);
        spec.push_pauli(&px, x, 0.0).map_err(e2s)?;
        spec.push_pauli(&pz, z, 0.0).map_err(e2s)?;
        let rho = step_one_select_state(&spec, &StepOneObjective::MinPurity, &SolverOptions::default()).map_err(e2s)?;
        let b = [
            expectation(rho.matrix(), &px).map_err(e2s)?,
            expectation(rho.matrix(), &py).map_err(e2s)?,
            expectation(rho.matrix(), &pz).map_err(e2s)?,
        ];
        let dev = (b[0] - x).abs().max(b[1].abs()).max((b[2] - z).abs());
        worst_bloch = worst_bloch.max(dev);
        ensure(dev <= 1e-5, || format!("({x}, {z}): minimiser Bloch vector {b:?}"))?;
    }
    Ok(format!("purity gap {worst:.1e}, Bloch deviation {worst_bloch:.1e}"))
}

fn c8_coverage() -> Check {
    let rho = make_reference_state(StateKind::W, None, 2).map_err(e2s)?;
    let strings = &hierarchical_order(2, 8)[..10];
    let mut rates = Vec::new();
    for delta in [0.01, 0.05, 0.1] {
        let plan = simulate_plan(&rho, strings, 1000, delta, 0).map_err(e2s)?;
        let rate = coverage_rate(&rho, &plan, 500, derive_seed(8, &[(delta * 1000.0) as u64])).map_err(e2s)?;
        ensure(rate <= delta, || format!("delta={delta}: violation rate {rate}"))?;
        rates.push(format!("{delta}:{rate}"));
    }
    let eps = hoeffding_epsilon(16384, 60, 0.003).map_err(e2s)?;
    let back = 2.0 * (-16384.0 * eps * eps / 2.0).exp();
    ensure((back - 0.003 / 60.0).abs() <= 1e-12, || format!("back-substitution {back} vs {}", 0.003 / 60.0))?;
    Ok(format!("rates {}, eps {eps:.6}", rates.join(" ")))
}

fn c9_tightening() -> Check {
    let opts = SolverOptions {
        tol_gap: 1e-12,
        tol_feas: 1e-12,
        ..SolverOptions::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = f64::INFINITY;
    for case in 0..30u64 {
        let rho = DensityMatrix::new(random_density(4, &mut rng)).map_err(e2s)?;
        let h = HamiltonianData::from_matrix(random_hermitian(4, &mut rng)).map_err(e2s)?;
        let k = rng.random_range(3..=15);
        let order = hierarchical_order(2, case);
        let mut wide = FeasibleSetSpec::new(4, Provenance::Estimated);
        let mut narrow = FeasibleSetSpec::new(4, Provenance::Estimated);
        for p in &order[..k] {
            let eps: f64 = rng.random_range(0.02..0.2);
            let target = expectation(rho.matrix(), p).map_err(e2s)? + rng.random_range(-0.25..0.25) * eps;
            wide.push_pauli(p, target, eps).map_err(e2s)?;
            narrow.push_pauli(p, target, eps / 2.0).map_err(e2s)?;
        }
        let u = build_tilde_unitary(&step_one_select_state(&wide, &StepOneObjective::MinPurity, &opts).map_err(e2s)?, &h)
            .map_err(e2s)?;
        let a = step_two_bound(&wide, &h, &u, &opts).map_err(|e| format!("case {case}: {e}"))?;
        let b = step_two_bound(&narrow, &h, &u, &opts).map_err(|e| format!("case {case}: {e}"))?;
        worst = worst.min(b - a);
        ensure(b >= a - 1e-9, || format!("case {case}: halving eps lowered {a} to {b}"))?;
    }
    Ok(format!("min change {worst:.2e}"))
}

fn c10_figure_pipeline() -> Check {
    let base = SweepConfig {
        hamiltonian: annni(),
        state: StateKind::ExtremalSuperposition { s: 1.0 },
        n: 3,
        realizations: 20,
        seed: 2024,
        k_list: (1..=63).collect(),
        ..SweepConfig::default()
    };
    let exact = run_sweep(&base).map_err(e2s)?;
    let noisy = |shots: u64| {
        run_sweep(&SweepConfig {
            shots: Some(shots),
            delta: Some(0.003),
            ..base.clone()
        })
        .map_err(e2s)
    };
    let low = noisy(10_000)?;
    let high = noisy(1_000_000)?;
    let ks = exact.rows.len();
    let better = high.rows.iter().zip(&low.rows).filter(|(h, l)| h.median >= l.median).count();
    let frac = better as f64 / ks as f64;
    for ((e, h), l) in exact.rows.iter().zip(&high.rows).zip(&low.rows) {
        ensure(e.median >= h.median - 1e-6 && e.median >= l.median - 1e-6, || {
            format!("K={}: exact median {} below noisy medians {} / {}", e.k, e.median, h.median, l.median)
        })?;
        ensure(e.q75 <= e.exact + 1e-6 && h.q75 <= e.exact + 1e-6 && l.q75 <= e.exact + 1e-6, || format!("K={}: unsound", e.k))?;
    }
    ensure(frac >= 0.9, || format!("1e6-shot median >= 1e4-shot median at only {better}/{ks} K values"))?;
    let last = |o: &SweepOutput| o.rows.last().map_or(0.0, |r| r.median);
    Ok(format!(
        "high >= low at {better}/{ks} K; final medians exact {:.4}, 1e6 {:.4}, 1e4 {:.4} (ergotropy {:.4}); failures {}/{}",
        last(&exact),
        last(&high),
        last(&low),
        exact.exact,
        high.total_failures(),
        low.total_failures()
    ))
}

fn c11_determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("ergocert-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let records = dir.join("records.csv");
    let records = records.to_str().ok_or("temp path")?;
    let commands: Vec<Vec<&str>> = vec![
        vec!["exact", "--state", "w", "-n", "3"],
        vec!["simulate-records", "--state", "ghz", "-n", "2", "--shots", "4000", "--delta", "0.05", "--seed", "3", "-o", records],
        vec!["certify", "--state", "ghz", "-n", "3", "-k", "20", "--shots", "10000", "--delta", "0.01", "--seed", "4"],
        vec!["sweep", "-n", "2", "--state", "gibbs:-1", "--shots", "5000", "--delta", "0.05", "-r", "5", "--seed", "5", "--monotone"],
        vec!["certify-file", records],
        vec!["coverage", "-n", "2", "-k", "10", "--shots", "1000", "--delta", "0.01,0.05,0.1", "-m", "200", "--seed", "6"],
        vec!["analytic", "energy", "--steps", "5"],
        vec!["analytic", "qubit", "--x", "0.3", "--z", "-0.2"],
    ];
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_ergocert")).args(args).output().map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)))?;
        if args.contains(&"-o") {
            std::fs::read(records).map_err(|e| e.to_string())
        } else {
            Ok(out.stdout)
        }
    };
    for args in &commands {
        let (a, b) = (run(args)?, run(args)?);
        ensure(a == b, || format!("{} output differs between runs", args[0]))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} commands byte-identical", commands.len()))
}

fn main() -> ExitCode {
    let _ = env_logger::builder().is_test(true).try_init();
    let criteria: [(&str, fn() -> Check); 11] = [
        ("exact ergotropy dominates Haar unitaries", c1_oracle_dominance),
        ("soundness of exact-constraint sweeps", c2_soundness),
        ("completeness with all Pauli constraints", c3_completeness),
        ("monotone chains never decrease", c4_monotone),
        ("population-only bound", c5_population_bound),
        ("qubit closed form, SDP and grid oracle", c6_qubit),
        ("minimum-purity SDP", c7_purity),
        ("Hoeffding coverage", c8_coverage),
        ("narrower intervals never loosen step (ii)", c9_tightening),
        ("three-qubit shot-count sweeps", c10_figure_pipeline),
        ("seeded commands are deterministic", c11_determinism),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

