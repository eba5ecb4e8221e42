use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use greenvod_cli::commands::{self, ExitClass};

/// Optimizes and evaluates hourly VoD delivery from cloud, metro-fog and
/// access-fog data centres over an IP-over-WDM network, minimizing brown
/// energy under solar generation and battery dispatch.
#[derive(Parser)]
#[command(name = "greenvod", version, about)]
struct Cli {
    /// Config file (flat key = value; see README).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Solver command template with {mps}, {sol} and optional {tl}
    /// placeholders; defaults to $GREENVOD_SOLVER, then highs/cbc on PATH.
    #[arg(long, global = true)]
    solver_cmd: Option<String>,

    /// Solver time limit in seconds.
    #[arg(long, global = true, default_value_t = 300)]
    time_limit: u64,

    /// Skip the solver and place with the greedy baseline.
    #[arg(long, global = true)]
    no_solver: bool,

    /// Output directory for CSV files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Optimize one scenario, verify the plan and write plan/core/breakdown CSVs.
    Run,
    /// Sweep metro- and access-fog PUE values and tabulate brown energy and
    /// tier shares per grid point.
    SweepPue,
    /// Renewable CDC/MFDC + solar AFDC study against the brown-CDC baseline.
    ScenarioB,
    /// Scenario B plus batteries; reports the additional savings.
    ScenarioC,
    /// Emit the optimization model as fixed-format MPS (plus name map).
    EmitMps {
        /// Output path for the MPS file.
        #[arg(long, default_value = "model.mps")]
        mps_out: PathBuf,
    },
    /// Verify a plan CSV against a config; nonzero exit on violations.
    Verify {
        /// Plan CSV produced by `run`.
        #[arg(long)]
        plan: PathBuf,
        /// Core-traffic CSV produced by `run` (enables core checks).
        #[arg(long)]
        core: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = commands::Options {
        config: cli.config,
        solver_cmd: cli.solver_cmd,
        time_limit_s: cli.time_limit,
        no_solver: cli.no_solver,
        out_dir: cli.out,
    };
    let result = match cli.command {
        Commands::Run => commands::run(&opts),
        Commands::SweepPue => commands::sweep_pue(&opts),
        Commands::ScenarioB => commands::scenario_study(&opts, false),
        Commands::ScenarioC => commands::scenario_study(&opts, true),
        Commands::EmitMps { mps_out } => commands::emit_mps(&opts, &mps_out),
        Commands::Verify { plan, core } => commands::verify(&opts, &plan, core.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ExitClass::of(&e) as u8)
        }
    }
}
