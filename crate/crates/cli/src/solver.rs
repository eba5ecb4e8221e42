//! External MILP solver integration: write MPS to a temp file, run a
//! configured command, read back the solution file it produces.
//!
//! The command is a template with `{mps}` and `{sol}` placeholders (and an
//! optional `{tl}` for the time limit in seconds). When no command is
//! configured the `GREENVOD_SOLVER` environment variable is consulted, then
//! `highs` and `cbc` are probed on PATH.

use std::io::Write as _;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use greenvod_core::milp::{parse_solution, MilpModel, SolutionValues, SolveStatus};

/// Environment variable holding the default solver command template.
pub const SOLVER_ENV: &str = "GREENVOD_SOLVER";

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error(
        "no MILP solver configured: pass --solver-cmd, set {SOLVER_ENV}, or install highs/cbc on PATH"
    )]
    NotConfigured,
    #[error("solver command failed to start ({command}): {source}")]
    Spawn {
        command: String,
        source: std::io::Error,
    },
    #[error("solver exited with {status}; stderr: {stderr}")]
    NonZeroExit { status: String, stderr: String },
    #[error("solver hit the {limit_s} s time limit; incumbent {}", if .incumbent.is_some() { "available" } else { "unavailable" })]
    Timeout {
        limit_s: u64,
        incumbent: Option<String>,
    },
    #[error("solver produced no solution file at {0}")]
    NoSolutionFile(String),
    #[error("solution file io: {0}")]
    Io(#[from] std::io::Error),
    #[error("model is infeasible")]
    Infeasible,
    #[error("model is unbounded")]
    Unbounded,
    #[error(transparent)]
    Parse(#[from] greenvod_core::milp::SolutionParseError),
}

/// A solver command template.
#[derive(Debug, Clone)]
pub struct SolverCommand {
    template: String,
}

impl SolverCommand {
    pub fn new(template: &str) -> Self {
        Self {
            template: template.to_string(),
        }
    }

    /// Template for a `highs` binary.
    pub fn highs(binary: &str) -> Self {
        Self::new(&format!(
            "{binary} {{mps}} --solution_file {{sol}} --time_limit {{tl}}"
        ))
    }

    /// Template for a `cbc` binary. `printingOptions all` makes CBC write
    /// zero columns too, which the strict parser requires.
    pub fn cbc(binary: &str) -> Self {
        Self::new(&format!(
            "{binary} {{mps}} sec {{tl}} printingOptions all solve solu {{sol}}"
        ))
    }

    /// Resolve a solver: explicit template, then the environment variable,
    /// then well-known binaries on PATH.
    pub fn resolve(explicit: Option<&str>) -> Result<Self, SolverError> {
        if let Some(t) = explicit {
            return Ok(Self::new(t));
        }
        if let Ok(t) = std::env::var(SOLVER_ENV) {
            if !t.trim().is_empty() {
                return Ok(Self::new(&t));
            }
        }
        if binary_on_path("highs") {
            return Ok(Self::highs("highs"));
        }
        if binary_on_path("cbc") {
            return Ok(Self::cbc("cbc"));
        }
        Err(SolverError::NotConfigured)
    }

    fn render(&self, mps: &Path, sol: &Path, time_limit_s: u64) -> Vec<String> {
        self.template
            .split_whitespace()
            .map(|tok| {
                tok.replace("{mps}", &mps.display().to_string())
                    .replace("{sol}", &sol.display().to_string())
                    .replace("{tl}", &time_limit_s.to_string())
            })
            .collect()
    }
}

fn binary_on_path(name: &str) -> bool {
    let Some(paths) = std::env::var_os("PATH") else {
        return false;
    };
    std::env::split_paths(&paths).any(|dir| dir.join(name).is_file())
}

/// Raw result of one solver run.
#[derive(Debug)]
pub struct SolverRun {
    pub raw_solution: String,
    pub elapsed: Duration,
}

/// Writes the MPS text to a temp directory, runs the solver command and
/// reads the solution file back. A timeout kills the process and surfaces
/// any partially written solution as the incumbent.
pub fn invoke_solver(
    mps_text: &str,
    command: &SolverCommand,
    time_limit_s: u64,
) -> Result<SolverRun, SolverError> {
    let dir = tempfile::tempdir()?;
    let mps_path = dir.path().join("model.mps");
    let sol_path = dir.path().join("model.sol");
    {
        let mut f = std::fs::File::create(&mps_path)?;
        f.write_all(mps_text.as_bytes())?;
    }

    let argv = command.render(&mps_path, &sol_path, time_limit_s);
    let (program, args) = argv
        .split_first()
        .ok_or(SolverError::NotConfigured)?;
    let start = Instant::now();
    let mut child = Command::new(program)
        .args(args)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|source| SolverError::Spawn {
            command: argv.join(" "),
            source,
        })?;

    // The solver gets a grace margin beyond its own limit before the kill.
    let hard_limit = Duration::from_secs(time_limit_s.saturating_add(30).max(30));
    let status = loop {
        match child.try_wait()? {
            Some(status) => break status,
            None => {
                if start.elapsed() > hard_limit {
                    let _ = child.kill();
                    let _ = child.wait();
                    let incumbent = std::fs::read_to_string(&sol_path).ok();
                    return Err(SolverError::Timeout {
                        limit_s: time_limit_s,
                        incumbent,
                    });
                }
                std::thread::sleep(Duration::from_millis(10));
            }
        }
    };
    let output = child.wait_with_output()?;
    if !status.success() {
        return Err(SolverError::NonZeroExit {
            status: status.to_string(),
            stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
        });
    }
    let raw_solution = std::fs::read_to_string(&sol_path)
        .map_err(|_| SolverError::NoSolutionFile(sol_path.display().to_string()))?;
    Ok(SolverRun {
        raw_solution,
        elapsed: start.elapsed(),
    })
}

/// Full solve: invoke the solver on the model and parse the solution.
/// Infeasible and unbounded verdicts come back as typed errors.
pub fn solve_model(
    model: &MilpModel,
    mps_text: &str,
    command: &SolverCommand,
    time_limit_s: u64,
) -> Result<SolutionValues, SolverError> {
    let run = invoke_solver(mps_text, command, time_limit_s)?;
    let parsed = parse_solution(&run.raw_solution, model)?;
    match parsed.status {
        SolveStatus::Infeasible => Err(SolverError::Infeasible),
        SolveStatus::Unbounded => Err(SolverError::Unbounded),
        SolveStatus::TimeLimit if parsed.values.is_none() => Err(SolverError::Timeout {
            limit_s: time_limit_s,
            incumbent: Some(run.raw_solution),
        }),
        _ => Ok(parsed),
    }
}
