use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nolb::dynamics::{Integrator, Model};
use nolb::graphs::{behind_graph, interaction_graph};
use nolb::harness::{
    run_interpolation_comparison, run_monte_carlo, scenario_counterexample_rstar1, scenario_hexagon, scenario_uniform,
    sweep_rstar, ComparisonSpec, InitialCondition, MonteCarloSpec, ScenarioSpec, DEFAULT_QUANTILES,
};
use nolb::io::manifest::{unix_ms, RunManifest};
use nolb::io::{csv, parse_scenario_file, write_scenario};
use nolb::{dynamics, Error};

#[derive(Parser)]
#[command(name = "nolb", version, about = "Bounded-confidence opinion dynamics with connectivity-preserving controls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its trajectory and metrics.
    Simulate(SimulateArgs),
    /// Run many realizations and write diameter quantiles and stopping times.
    Montecarlo(MonteCarloArgs),
    /// Stopping-time statistics across critical-region sizes.
    Sweep(SweepArgs),
    /// Bounded confidence, NOLB and RNOLB from one shared start.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    #[value(name = "counterexample-r1")]
    CounterexampleR1,
    Hexagon,
    Uniform,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Built-in starting configuration (default: uniform).
    #[arg(long, value_enum, conflicts_with = "config")]
    scenario: Option<Preset>,
    /// Scenario file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// bc, nolb-freeze, nolb or rnolb.
    #[arg(long, value_parser = parse_model)]
    model: Option<Model>,
    #[arg(long)]
    rstar: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of agents (uniform starts only).
    #[arg(long)]
    n: Option<usize>,
    /// Sampling interval length L, also used by the clustering number.
    #[arg(long)]
    domain_length: Option<f64>,
    /// Dimension (uniform starts only).
    #[arg(long)]
    dim: Option<usize>,
    /// Record every this many steps.
    #[arg(long)]
    record_every: Option<usize>,
    /// euler or ssp-rk2.
    #[arg(long, value_parser = parse_integrator)]
    integrator: Option<Integrator>,
    #[arg(long)]
    projection_tol: Option<f64>,
    #[arg(long)]
    geometry_eps: Option<f64>,
    /// Turn off step halving for steps that break interaction links.
    #[arg(long)]
    no_guard: bool,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Also write interaction and behind edge lists for every recorded step.
    #[arg(long)]
    emit_graphs: bool,
}

#[derive(Args)]
struct MonteCarloArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long)]
    realizations: usize,
    /// Comma-separated probabilities.
    #[arg(long, value_delimiter = ',')]
    quantiles: Option<Vec<f64>>,
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// End each realization once its diameter reaches this value.
    #[arg(long)]
    stop_below: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long)]
    realizations: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.1, 0.2, 0.4, 0.5, 0.6, 0.8])]
    rstar_values: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    quantiles: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 10.0)]
    domain_length: f64,
    #[arg(long, default_value_t = 0.5)]
    rstar: f64,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    #[arg(long, default_value_t = 500.0)]
    t_end: f64,
    #[arg(long, default_value_t = 10)]
    record_every: usize,
    /// End the NOLB and RNOLB runs once their diameter reaches this value.
    #[arg(long)]
    stop_below: Option<f64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_integrator(s: &str) -> Result<Integrator, String> {
    Integrator::parse(s).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Numerical(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        if e.is_numerical() {
            return Failure::Numerical(msg);
        }
        let mut inner = &e;
        while let Error::Realization { source, .. } = inner {
            inner = source;
        }
        match inner {
            Error::InvalidParameter { .. } | Error::Parse { .. } => Failure::Usage(msg),
            _ => Failure::Other(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn usage(flag: &str, reason: &str) -> Failure {
    Failure::Usage(format!("--{flag}: {reason}"))
}

fn build_spec(a: &ScenarioArgs) -> CliResult<ScenarioSpec> {
    let mut spec = match (&a.config, a.scenario) {
        (Some(path), _) => parse_scenario_file(path)?,
        (None, Some(Preset::CounterexampleR1)) => scenario_counterexample_rstar1(),
        (None, Some(Preset::Hexagon)) => {
            let mut s = scenario_hexagon(a.rstar.unwrap_or(0.05));
            s.params.t_end = 500.0;
            s
        }
        (None, Some(Preset::Uniform) | None) => scenario_uniform(50, 10.0, 1, 0, true),
    };
    let uniform = matches!(spec.initial, InitialCondition::Uniform { .. });
    if !uniform {
        if a.n.is_some() {
            return Err(usage("n", "only applies to uniform starts"));
        }
        if a.dim.is_some() {
            return Err(usage("dim", "only applies to uniform starts"));
        }
    }
    let p = &mut spec.params;
    if let Some(m) = a.model {
        p.model = m;
    }
    if let Some(r) = a.rstar {
        p.r_star = r;
    }
    if let Some(dt) = a.dt {
        p.dt = dt;
    }
    if let Some(t) = a.t_end {
        p.t_end = t;
    }
    if let Some(s) = a.seed {
        p.seed = s;
    }
    if let Some(tol) = a.projection_tol {
        p.projection_tol = tol;
    }
    if let Some(eps) = a.geometry_eps {
        p.geometry_eps = eps;
    }
    if let Some(i) = a.integrator {
        p.integrator = i;
    }
    if a.no_guard {
        p.connectivity_guard = false;
    }
    if let Some(k) = a.record_every {
        spec.record_every = k;
    }
    if let Some(l) = a.domain_length {
        spec.domain_length = l;
    }
    if let InitialCondition::Uniform {
        n,
        dim,
        domain_length,
        ..
    } = &mut spec.initial
    {
        if let Some(v) = a.n {
            *n = v;
        }
        if let Some(v) = a.dim {
            *dim = v;
        }
        if let Some(v) = a.domain_length {
            *domain_length = v;
        }
    }
    spec.validate()?;
    Ok(spec)
}

fn create(dir: &Path, name: &str) -> CliResult<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn prepare_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

fn parameters(spec: &ScenarioSpec, extra: serde_json::Value) -> serde_json::Value {
    serde_json::json!({ "scenario": spec, "run": extra })
}

fn simulate_cmd(a: &SimulateArgs) -> CliResult<()> {
    let started = unix_ms();
    let spec = build_spec(&a.scenario)?;
    let dir = &a.scenario.out_dir;
    let (_, tr) = spec.run()?;
    prepare_dir(dir)?;
    let mut files = vec!["scenario.txt".to_string(), "trajectory.csv".into(), "metrics.csv".into()];
    std::fs::write(dir.join("scenario.txt"), write_scenario(&spec))?;
    csv::write_trajectory(create(dir, "trajectory.csv")?, &tr.times, &tr.snapshots)?;
    csv::write_metrics(create(dir, "metrics.csv")?, &tr.metrics)?;
    if a.emit_graphs {
        std::fs::create_dir_all(dir.join("graphs"))?;
        let settings = spec.params.step_settings();
        for (k, snap) in tr.snapshots.iter().enumerate() {
            let g = interaction_graph(snap, settings.geometry_eps);
            let w = dynamics::interaction_weights(snap, &settings.phi, settings.geometry_eps);
            let avg = dynamics::local_average(snap, &w);
            let b = behind_graph(snap, &avg, settings.r_star, settings.geometry_eps);
            let name = format!("graphs/step_{k:06}.csv");
            csv::write_edges(create(dir, &name)?, &g, &[("behind", &b)])?;
            files.push(name);
        }
    }
    let stats = serde_json::to_value(tr.stats).map_err(Error::from)?;
    let extra = serde_json::json!({ "stats": stats, "emit_graphs": a.emit_graphs });
    RunManifest::new("simulate", parameters(&spec, extra), spec.params.seed, started).finish(dir, &files)?;
    Ok(())
}

fn monte_carlo_spec(scenario: ScenarioSpec, realizations: usize, quantiles: &Option<Vec<f64>>, jobs: usize) -> MonteCarloSpec {
    let mut mc = MonteCarloSpec::new(scenario, realizations);
    mc.quantiles = quantiles.clone().unwrap_or_else(|| DEFAULT_QUANTILES.to_vec());
    mc.jobs = jobs;
    mc
}

fn montecarlo_cmd(a: &MonteCarloArgs) -> CliResult<()> {
    let started = unix_ms();
    let spec = build_spec(&a.scenario)?;
    let mut mc = monte_carlo_spec(spec.clone(), a.realizations, &a.quantiles, a.jobs);
    mc.stop_below_diameter = a.stop_below;
    let result = run_monte_carlo(&mc)?;
    let dir = &a.scenario.out_dir;
    prepare_dir(dir)?;
    std::fs::write(dir.join("scenario.txt"), write_scenario(&spec))?;
    csv::write_quantiles(create(dir, "quantiles.csv")?, &result)?;
    csv::write_tau(create(dir, "tau.csv")?, &result)?;
    let extra = serde_json::json!({
        "realizations": a.realizations,
        "quantiles": mc.quantiles,
        "stop_below_diameter": a.stop_below,
    });
    let files = ["scenario.txt", "quantiles.csv", "tau.csv"].map(String::from);
    RunManifest::new("montecarlo", parameters(&spec, extra), spec.params.seed, started).finish(dir, &files)?;
    Ok(())
}

fn sweep_cmd(a: &SweepArgs) -> CliResult<()> {
    let started = unix_ms();
    let spec = build_spec(&a.scenario)?;
    let mc = monte_carlo_spec(spec.clone(), a.realizations, &a.quantiles, a.jobs);
    let rows = sweep_rstar(&mc, &a.rstar_values)?;
    let dir = &a.scenario.out_dir;
    prepare_dir(dir)?;
    std::fs::write(dir.join("scenario.txt"), write_scenario(&spec))?;
    csv::write_sweep(create(dir, "sweep.csv")?, &rows, &mc.quantiles)?;
    let extra = serde_json::json!({
        "realizations": a.realizations,
        "rstar_values": a.rstar_values,
        "quantiles": mc.quantiles,
    });
    let files = ["scenario.txt", "sweep.csv"].map(String::from);
    RunManifest::new("sweep", parameters(&spec, extra), spec.params.seed, started).finish(dir, &files)?;
    Ok(())
}

fn compare_cmd(a: &CompareArgs) -> CliResult<()> {
    let started = unix_ms();
    let spec = ComparisonSpec {
        seed: a.seed,
        n: a.n,
        domain_length: a.domain_length,
        r_star: a.rstar,
        dt: a.dt,
        t_end: a.t_end,
        record_every: a.record_every,
        stop_below_diameter: a.stop_below,
    };
    if a.n == 0 {
        return Err(usage("n", "must be at least 1"));
    }
    let result = run_interpolation_comparison(&spec)?;
    prepare_dir(&a.out_dir)?;
    let mut files = Vec::new();
    for (model, tr) in &result.runs {
        let name = format!("metrics_{model}.csv");
        csv::write_metrics(create(&a.out_dir, &name)?, &tr.metrics)?;
        files.push(name);
    }
    let params = serde_json::to_value(&spec).map_err(Error::from)?;
    RunManifest::new("compare", params, a.seed, started).finish(&a.out_dir, &files)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Simulate(a) => simulate_cmd(a),
        Command::Montecarlo(a) => montecarlo_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Compare(a) => compare_cmd(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
