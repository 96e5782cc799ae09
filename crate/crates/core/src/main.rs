use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ergocert::analytic::QubitXzInput;
use ergocert::certification::{certify, FeasibleSetSpec};
use ergocert::ergotropy::{dephase_incoherent, exact_ergotropy};
use ergocert::harness::{self, check_qubits, realization_seed, HamiltonianConfig, ObjectiveMode, SweepConfig};
use ergocert::measurement::{
    coverage_rate, hoeffding_epsilon, load_records, simulate_plan, write_records_csv, ExperimentPlan, GHZ4_MEASUREMENT_ORDER,
};
use ergocert::models::{make_reference_state, ModelPreset, StateKind};
use ergocert::pauli::{hierarchical_order, parse_pauli, PauliString};
use ergocert::{Error, Result};

#[derive(Parser)]
#[command(name = "ergocert", version, about = "Certified ergotropy lower bounds from Pauli measurement data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact ergotropy of a reference state.
    Exact(SystemArgs),
    /// Certify one feasible set built from the first K hierarchical strings.
    Certify(CertifyArgs),
    /// Median and interquartile bounds over realizations for each K.
    Sweep(SweepArgs),
    /// Certify record prefixes of a measurement file in file order.
    CertifyFile(CertifyFileArgs),
    /// Monte-Carlo check of the joint Hoeffding intervals.
    Coverage(CoverageArgs),
    /// Compare the two-step bound with the closed-form ones.
    #[command(subcommand)]
    Analytic(AnalyticCommand),
    /// Write simulated shot records for a reference state.
    SimulateRecords(SimulateArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// JSON sweep configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<ModelPreset>,
    #[arg(long, allow_hyphen_values = true)]
    j1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    j2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    jy: Option<f64>,
    /// ZZ anisotropy coupling.
    #[arg(long, allow_hyphen_values = true)]
    zz: Option<f64>,
    /// Permit up to five qubits.
    #[arg(long)]
    allow_slow: bool,
    /// Write output here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SystemArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// ghz, w, product, gibbs:<beta> or extremal[:<s>].
    #[arg(long)]
    state: Option<StateKind>,
    #[arg(long, short)]
    n: Option<usize>,
}

#[derive(Args, Clone)]
struct StatisticsArgs {
    #[arg(long)]
    shots: Option<u64>,
    /// Confidence parameter; the intervals hold jointly with probability 1 - delta.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    stats: StatisticsArgs,
    /// Number of hierarchical strings.
    #[arg(long, short)]
    k: Option<usize>,
    /// Explicit comma-separated strings instead of the hierarchical order.
    #[arg(long, value_delimiter = ',')]
    paulis: Vec<String>,
    #[arg(long)]
    objective: Option<ObjectiveMode>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    stats: StatisticsArgs,
    #[arg(long, short)]
    realizations: Option<usize>,
    #[arg(long)]
    objective: Option<ObjectiveMode>,
    #[arg(long)]
    monotone: bool,
    /// Comma-separated constraint counts; default 1..=4^n - 1.
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
}

#[derive(Args)]
struct CertifyFileArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// CSV (`pauli,estimate,shots`) or JSON record file.
    records: PathBuf,
    /// Overrides the delta stored in the file.
    #[arg(long)]
    delta: Option<f64>,
    /// Certify each prefix independently instead of carrying the unitary.
    #[arg(long)]
    independent: bool,
    #[arg(long)]
    objective: Option<ObjectiveMode>,
}

#[derive(Args)]
struct CoverageArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Number of hierarchical strings measured.
    #[arg(long, short, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 1000)]
    shots: u64,
    /// One or more comma-separated confidence parameters.
    #[arg(long, value_delimiter = ',', default_values_t = [0.05])]
    delta: Vec<f64>,
    #[arg(long, short = 'm', default_value_t = 500)]
    repetitions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum AnalyticCommand {
    /// Bounds along |E_1> + s|E_d> from the Hamiltonian's Pauli terms.
    Energy(EnergyArgs),
    /// Closed form, two-step and grid oracle for one qubit with <X>, <Z> known.
    Qubit(QubitArgs),
}

#[derive(Args)]
struct EnergyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, short, default_value_t = 2)]
    n: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    s_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    s_max: f64,
    #[arg(long, default_value_t = 21)]
    steps: usize,
}

#[derive(Args)]
struct QubitArgs {
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, allow_hyphen_values = true)]
    z: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    e0: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    e1: f64,
    #[arg(long, default_value_t = 2001)]
    resolution: usize,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Comma-separated strings; default is the 60-string order for four qubits and
    /// the full hierarchical order otherwise.
    #[arg(long, value_delimiter = ',')]
    paulis: Vec<String>,
    #[arg(long, default_value_t = 1 << 14)]
    shots: u64,
    #[arg(long, default_value_t = 0.003)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Command outcome when no hard error occurred.
enum Outcome {
    Done,
    SomeInfeasible,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::SomeInfeasible) => ExitCode::from(2),
        Err(e @ Error::InfeasibleSet { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Exact(args) => exact(args),
        Command::Certify(args) => certify_one(args),
        Command::Sweep(args) => sweep(args),
        Command::CertifyFile(args) => certify_file(args),
        Command::Coverage(args) => coverage(args),
        Command::Analytic(AnalyticCommand::Energy(args)) => analytic_energy(args),
        Command::Analytic(AnalyticCommand::Qubit(args)) => analytic_qubit(args),
        Command::SimulateRecords(args) => simulate(args),
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json(path: &Option<PathBuf>, value: serde_json::Value) -> Result<()> {
    let mut out = output(path)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&value).map_err(|e| Error::Io(e.to_string()))?)?;
    out.flush()?;
    Ok(())
}

fn apply_model(base: HamiltonianConfig, m: &ModelArgs) -> HamiltonianConfig {
    HamiltonianConfig {
        preset: m.preset.unwrap_or(base.preset),
        j1: m.j1.unwrap_or(base.j1),
        j2: m.j2.unwrap_or(base.j2),
        b: m.b.unwrap_or(base.b),
        g: m.g.unwrap_or(base.g),
        jy: m.jy.unwrap_or(base.jy),
        delta: m.zz.unwrap_or(base.delta),
    }
}

fn base_config(m: &ModelArgs) -> Result<SweepConfig> {
    match &m.config {
        Some(path) => SweepConfig::from_json_file(path),
        None => Ok(SweepConfig::default()),
    }
}

fn system_config(s: &SystemArgs) -> Result<SweepConfig> {
    let mut cfg = base_config(&s.model)?;
    cfg.hamiltonian = apply_model(cfg.hamiltonian, &s.model);
    cfg.state = s.state.unwrap_or(cfg.state);
    cfg.n = s.n.unwrap_or(cfg.n);
    cfg.allow_slow |= s.model.allow_slow;
    Ok(cfg)
}

fn apply_statistics(cfg: &mut SweepConfig, s: &StatisticsArgs) {
    cfg.shots = s.shots.or(cfg.shots);
    cfg.delta = s.delta.or(cfg.delta);
    cfg.seed = s.seed.unwrap_or(cfg.seed);
}

fn parse_strings(labels: &[String]) -> Result<Vec<PauliString>> {
    labels.iter().map(|s| parse_pauli(s.trim())).collect()
}

fn exact(args: SystemArgs) -> Result<Outcome> {
    let cfg = system_config(&args)?;
    check_qubits(cfg.n, cfg.allow_slow)?;
    let h = cfg.hamiltonian.build(cfg.n)?;
    let rho = make_reference_state(cfg.state, Some(&h), cfg.n)?;
    let report = exact_ergotropy(&rho, &h)?;
    let (_, incoherent) = dephase_incoherent(&rho, &h)?;
    print_json(
        &args.model.out,
        json!({
            "n": cfg.n,
            "state": cfg.state.label(),
            "hamiltonian": cfg.hamiltonian.params(cfg.n),
            "mean_energy": h.mean_energy(&rho),
            "ergotropy": report.value,
            "incoherent": incoherent,
            "coherent": report.value - incoherent,
            "purity": rho.purity(),
        }),
    )?;
    Ok(Outcome::Done)
}

fn certify_one(args: CertifyArgs) -> Result<Outcome> {
    let mut cfg = system_config(&args.system)?;
    apply_statistics(&mut cfg, &args.stats);
    cfg.objective = args.objective.unwrap_or(cfg.objective);
    cfg.validate()?;
    let n = cfg.n;
    let h = cfg.hamiltonian.build(n)?;
    let rho = make_reference_state(cfg.state, Some(&h), n)?;
    let strings = if args.paulis.is_empty() {
        let k = args.k.unwrap_or(cfg.max_k());
        let order = hierarchical_order(n, realization_seed(cfg.seed, 0));
        if k == 0 || k > order.len() {
            return Err(Error::Config(format!("K = {k} outside 1..={}", order.len())));
        }
        order[..k].to_vec()
    } else {
        parse_strings(&args.paulis)?
    };
    let spec = match (cfg.shots, cfg.delta) {
        (Some(shots), Some(delta)) => {
            let plan = simulate_plan(&rho, &strings, shots, delta, cfg.seed)?;
            plan.feasible_set(plan.len())?
        }
        _ => FeasibleSetSpec::exact_from_state(&rho, &strings)?,
    };
    let opts = cfg.objective.certify_options(&h, cfg.solver);
    let result = certify(&spec, &h, &opts)?;
    let labels: Vec<String> = strings.iter().map(|p| p.to_string()).collect();
    print_json(
        &args.system.model.out,
        json!({
            "K": strings.len(),
            "strings": labels,
            "bound": result.bound,
            "raw_min": result.raw_min,
            "exact": exact_ergotropy(&rho, &h)?.value,
            "step1_purity": result.step1_state.purity(),
            "diagnostics": result.diagnostics,
        }),
    )?;
    Ok(Outcome::Done)
}

fn sweep(args: SweepArgs) -> Result<Outcome> {
    let mut cfg = system_config(&args.system)?;
    apply_statistics(&mut cfg, &args.stats);
    cfg.realizations = args.realizations.unwrap_or(cfg.realizations);
    cfg.objective = args.objective.unwrap_or(cfg.objective);
    cfg.monotone |= args.monotone;
    if !args.k.is_empty() {
        cfg.k_list = args.k.clone();
    }
    let result = harness::run_sweep(&cfg)?;
    let mut out = output(&args.system.model.out)?;
    harness::write_sweep_csv(&mut out, &cfg, &result)?;
    out.flush()?;
    Ok(if result.total_failures() > 0 {
        Outcome::SomeInfeasible
    } else {
        Outcome::Done
    })
}

fn certify_file(args: CertifyFileArgs) -> Result<Outcome> {
    let base = base_config(&args.model)?;
    let hamiltonian = apply_model(base.hamiltonian, &args.model);
    let plan = load_records(&args.records, args.delta.or(base.delta))?;
    let n = plan.num_qubits();
    check_qubits(n, base.allow_slow || args.model.allow_slow)?;
    let h = hamiltonian.build(n)?;
    let objective = args.objective.unwrap_or(base.objective);
    let opts = objective.certify_options(&h, base.solver);
    let monotone = !args.independent;
    let result = harness::run_certify_file(&plan, &h, &opts, monotone)?;
    let header = vec![
        format!("records={}", args.records.display()),
        format!("K={}", plan.len()),
        format!("delta={}", plan.delta()),
        format!("hamiltonian={}", serde_json::to_string(&hamiltonian.params(n)).map_err(|e| Error::Io(e.to_string()))?),
        format!("monotone={monotone}"),
    ];
    let mut out = output(&args.model.out)?;
    harness::write_certify_file_csv(&mut out, &header, &result)?;
    out.flush()?;
    eprintln!(
        "best bound {} (unitary last updated at K = {})",
        result.best_bound,
        result.last_updated_k.map_or("none".to_string(), |k| k.to_string())
    );
    Ok(if result.infeasible_count() > 0 {
        Outcome::SomeInfeasible
    } else {
        Outcome::Done
    })
}

fn coverage(args: CoverageArgs) -> Result<Outcome> {
    let cfg = system_config(&args.system)?;
    check_qubits(cfg.n, cfg.allow_slow)?;
    let h = cfg.hamiltonian.build(cfg.n)?;
    let rho = make_reference_state(cfg.state, Some(&h), cfg.n)?;
    let order = hierarchical_order(cfg.n, realization_seed(args.seed, 0));
    if args.k == 0 || args.k > order.len() {
        return Err(Error::Config(format!("K = {} outside 1..={}", args.k, order.len())));
    }
    let mut out = output(&args.system.model.out)?;
    writeln!(out, "# schema={}", harness::CSV_SCHEMA)?;
    writeln!(out, "# version={}", harness::version_string())?;
    writeln!(out, "# command=coverage state={} n={} seed={}", cfg.state.label(), cfg.n, args.seed)?;
    writeln!(out, "delta,K,shots,repetitions,epsilon,violation_rate")?;
    for &delta in &args.delta {
        let plan: ExperimentPlan = simulate_plan(&rho, &order[..args.k], args.shots, delta, args.seed)?;
        let rate = coverage_rate(&rho, &plan, args.repetitions, args.seed)?;
        let eps = hoeffding_epsilon(args.shots, args.k, delta)?;
        writeln!(out, "{delta},{},{},{},{eps},{rate}", args.k, args.shots, args.repetitions)?;
    }
    out.flush()?;
    Ok(Outcome::Done)
}

fn analytic_energy(args: EnergyArgs) -> Result<Outcome> {
    let base = match &args.model.config {
        Some(path) => SweepConfig::from_json_file(path)?.hamiltonian,
        None => HamiltonianConfig {
            preset: ModelPreset::Xxz,
            j1: -1.0,
            jy: -1.0,
            delta: -0.5,
            ..HamiltonianConfig::default()
        },
    };
    let hamiltonian = apply_model(base, &args.model);
    check_qubits(args.n, args.model.allow_slow)?;
    if args.steps == 0 {
        return Err(Error::EmptyGrid);
    }
    let s_values: Vec<f64> = (0..args.steps)
        .map(|i| {
            if args.steps == 1 {
                args.s_min
            } else {
                args.s_min + (args.s_max - args.s_min) * i as f64 / (args.steps - 1) as f64
            }
        })
        .collect();
    let rows = harness::run_energy_comparison(&hamiltonian, args.n, &s_values, &Default::default())?;
    let header = vec![format!(
        "hamiltonian={}",
        serde_json::to_string(&hamiltonian.params(args.n)).map_err(|e| Error::Io(e.to_string()))?
    )];
    let mut out = output(&args.model.out)?;
    harness::write_energy_comparison_csv(&mut out, &header, &rows)?;
    out.flush()?;
    Ok(Outcome::Done)
}

fn analytic_qubit(args: QubitArgs) -> Result<Outcome> {
    let input = QubitXzInput::new(args.x, args.z, (args.e0, args.e1))?;
    let c = harness::run_qubit_comparison(&input, args.resolution, &Default::default())?;
    print_json(&None, json!({ "input": input, "result": c }))?;
    Ok(Outcome::Done)
}

fn simulate(args: SimulateArgs) -> Result<Outcome> {
    let mut cfg = system_config(&args.system)?;
    let strings = if args.paulis.is_empty() {
        cfg.n = args.system.n.unwrap_or(4);
        if cfg.n == 4 {
            GHZ4_MEASUREMENT_ORDER.iter().map(|s| parse_pauli(s)).collect::<Result<Vec<_>>>()?
        } else {
            hierarchical_order(cfg.n, args.seed)
        }
    } else {
        parse_strings(&args.paulis)?
    };
    let n = strings.first().map_or(cfg.n, |p| p.num_qubits());
    check_qubits(n, true)?;
    let h = cfg.hamiltonian.build(n)?;
    let rho = make_reference_state(cfg.state, Some(&h), n)?;
    let plan = simulate_plan(&rho, &strings, args.shots, args.delta, args.seed)?;
    let comments = vec![format!(
        "synthetic records simulated from state={} n={n} shots={} seed={}",
        cfg.state.label(),
        args.shots,
        args.seed
    )];
    let mut out = output(&args.system.model.out)?;
    write_records_csv(&mut out, &plan, &comments)?;
    out.flush()?;
    Ok(Outcome::Done)
}
