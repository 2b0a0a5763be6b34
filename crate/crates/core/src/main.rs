//! Command-line interface: instance generation, single solves, experiment
//! sweeps, and feasibility checks. Exit codes: 0 success, 1 infeasible or
//! failed solve, 2 usage or format errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vranpap::exact::{solve_exact, SolveLimits, SolveStatus};
use vranpap::greedy::{solve_caga, GreedyStatus};
use vranpap::metrics;
use vranpap::model::{check_feasibility, ProblemInstance, Solution};
use vranpap::report::emit_report;
use vranpap::sweep::{run_sweep, SweepConfig};
use vranpap::topology::{derive_instance, generate_ran, GeneratorConfig};

#[derive(Parser)]
#[command(
    name = "vranpap",
    about = "Placement and assignment solvers for virtualized RANs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance (and optionally its topology) as JSON.
    Generate(GenerateArgs),
    /// Solve an instance JSON with the chosen solver.
    Solve(SolveArgs),
    /// Run an experiment sweep and emit results.csv plus plots.
    Sweep(SweepArgs),
    /// Check a (instance, solution) pair against all constraints.
    Check(CheckArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Generator config JSON file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of RRH sites (and co-located BBU candidates).
    #[arg(long)]
    sites: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    grid_size: Option<f64>,
    #[arg(long)]
    waxman_alpha: Option<f64>,
    #[arg(long)]
    waxman_beta: Option<f64>,
    #[arg(long)]
    hop_fixed_cost: Option<f64>,
    #[arg(long)]
    signal_speed: Option<f64>,
    /// Placement budget of the derived instance.
    #[arg(long, default_value_t = 15)]
    budget: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Instance JSON output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the generated topology as JSON.
    #[arg(long)]
    graph_out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Which solver to run: "exact" or "caga".
    #[arg(long)]
    solver: String,
    /// Exact-solver time limit in seconds; 0 means unlimited.
    #[arg(long, default_value_t = 0.0)]
    time_limit: f64,
    /// Exact-solver node limit; 0 means unlimited.
    #[arg(long, default_value_t = 0)]
    node_limit: u64,
    /// Output path for the solve report JSON; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep config JSON file; the defaults describe a by-sites sweep.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "sweep-out")]
    out_dir: PathBuf,
    /// Skip figure rendering; the CSV is always written.
    #[arg(long)]
    no_plots: bool,
    /// Run the exact solver even beyond the site-count guard.
    #[arg(long)]
    force_exact: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    solution: PathBuf,
}

enum CliOutcome {
    Ok,
    SolveFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(CliOutcome::Ok) => ExitCode::SUCCESS,
        Ok(CliOutcome::SolveFailed) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<CliOutcome, String> {
    match cli.command {
        Command::Generate(args) => generate(args),
        Command::Solve(args) => solve(args),
        Command::Sweep(args) => sweep(args),
        Command::Check(args) => check(args),
    }
}

fn read_to_string(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn generate(args: GenerateArgs) -> Result<CliOutcome, String> {
    let mut config = match &args.config {
        Some(path) => serde_json::from_str::<GeneratorConfig>(&read_to_string(path)?)
            .map_err(|e| format!("parsing {}: {e}", path.display()))?,
        None => GeneratorConfig::default(),
    };
    if let Some(sites) = args.sites {
        config.site_count = sites;
    }
    if let Some(seed) = args.seed {
        config.rng_seed = seed;
    }
    if let Some(v) = args.grid_size {
        config.grid_size = v;
    }
    if let Some(v) = args.waxman_alpha {
        config.waxman_alpha = v;
    }
    if let Some(v) = args.waxman_beta {
        config.waxman_beta = v;
    }
    if let Some(v) = args.hop_fixed_cost {
        config.hop_fixed_cost = v;
    }
    if let Some(v) = args.signal_speed {
        config.signal_speed = v;
    }

    let graph = generate_ran(&config).map_err(|e| e.to_string())?;
    let instance =
        derive_instance(&graph, &config, args.budget, args.alpha, args.beta).map_err(|e| e.to_string())?;
    if let Some(path) = &args.graph_out {
        std::fs::write(path, graph.to_json().map_err(|e| e.to_string())?)
            .map_err(|e| format!("writing {}: {e}", path.display()))?;
    }
    emit(&args.out, &instance.to_json().map_err(|e| e.to_string())?)?;
    Ok(CliOutcome::Ok)
}

fn solve(args: SolveArgs) -> Result<CliOutcome, String> {
    let instance = ProblemInstance::from_json(&read_to_string(&args.instance)?)
        .map_err(|e| format!("parsing {}: {e}", args.instance.display()))?;

    let (status_text, solution, wall_time, extras) = match args.solver.as_str() {
        "exact" => {
            let limits = SolveLimits {
                time_limit: args.time_limit,
                node_limit: args.node_limit,
            };
            let outcome = solve_exact(&instance, &limits).map_err(|e| e.to_string())?;
            let status = match outcome.status {
                SolveStatus::Optimal => "optimal",
                SolveStatus::Infeasible => "infeasible",
                SolveStatus::LimitReached => "limit_reached",
            };
            let extras = serde_json::json!({
                "nodes_explored": outcome.nodes_explored,
                "gap": outcome.gap,
            });
            (status, outcome.solution, outcome.wall_time, extras)
        }
        "caga" => {
            let outcome = solve_caga(&instance).map_err(|e| e.to_string())?;
            let status = match outcome.status {
                GreedyStatus::Success => "success",
                GreedyStatus::Failed => "failed",
            };
            (status, outcome.solution, outcome.wall_time, serde_json::json!({}))
        }
        other => return Err(format!("unknown solver {other:?}; expected \"exact\" or \"caga\"")),
    };

    let metrics_row = metrics::summarize(&instance, solution.as_ref(), wall_time);
    let report = serde_json::json!({
        "status": status_text,
        "wall_time_s": wall_time,
        "solution": solution,
        "metrics": metrics_row,
        "solver_info": extras,
    });
    emit(
        &args.out,
        &serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?,
    )?;

    if solution.is_none() {
        if args.solver == "caga" {
            eprintln!("Placement and Assignment Failed");
        } else {
            eprintln!("no feasible solution ({status_text})");
        }
        return Ok(CliOutcome::SolveFailed);
    }
    Ok(CliOutcome::Ok)
}

fn sweep(args: SweepArgs) -> Result<CliOutcome, String> {
    let mut config = match &args.config {
        Some(path) => SweepConfig::from_json(&read_to_string(path)?)
            .map_err(|e| format!("parsing {}: {e}", path.display()))?,
        None => SweepConfig::default(),
    };
    if args.force_exact {
        config.force_exact = true;
    }
    let table = run_sweep(&config).map_err(|e| e.to_string())?;
    let written = emit_report(&table, &args.out_dir, !args.no_plots).map_err(|e| e.to_string())?;
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    Ok(CliOutcome::Ok)
}

fn check(args: CheckArgs) -> Result<CliOutcome, String> {
    let instance = ProblemInstance::from_json(&read_to_string(&args.instance)?)
        .map_err(|e| format!("parsing {}: {e}", args.instance.display()))?;
    let solution = Solution::from_json(&read_to_string(&args.solution)?)
        .map_err(|e| format!("parsing {}: {e}", args.solution.display()))?;
    let report = check_feasibility(&instance, &solution);
    println!(
        "{}",
        serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?
    );
    if report.is_ok() {
        Ok(CliOutcome::Ok)
    } else {
        Ok(CliOutcome::SolveFailed)
    }
}
