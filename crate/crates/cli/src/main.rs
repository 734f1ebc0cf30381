//! `identinet`: solve, analyse and simulate identity network games from
//! JSON instance files.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "identinet", version, about = "Network game of social identity and action choice")]
struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, env = "IDENTINET_OUTPUT_DIR", default_value = ".")]
    output_dir: PathBuf,

    /// Only write files of this format (default: every applicable format).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an instance file and report every invariant violation.
    Validate(InputArgs),
    /// Action equilibrium, utilities and value functions.
    Solve(SolveArgs),
    /// Identity diffusion under a schedule of relative costs.
    Cascade(CascadeArgs),
    /// Enumerate all identity equilibria of a small network.
    Equilibria(EquilibriaArgs),
    /// Maximal blocking set at a relative cost.
    Blocking(BlockingArgs),
    /// Welfare of the instance profile against uniform profiles.
    Welfare(InputArgs),
    /// Generate a scenario instance and check its predictions.
    Scenario(ScenarioArgs),
}

#[derive(Debug, Args, Serialize)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Direct,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Deviation {
    Fixed,
    Resolve,
}

#[derive(Debug, Args, Serialize)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "direct")]
    method: Method,
    /// Iterative solver step tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    max_iters: usize,
    /// Random start for the iterative solver; zeros when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// How a deviating individual treats the others' actions.
    #[arg(long, value_enum, default_value = "fixed")]
    deviation: Deviation,
}

/// Which two identities play sides A and B, and at what relative cost.
#[derive(Debug, Args, Serialize)]
struct SideArgs {
    /// Relative cost; computed from the two identities when omitted.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    /// Labels of the identities on sides A and B (default: the first two).
    #[arg(long, value_delimiter = ',', num_args = 2)]
    sides: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Monotone,
    General,
}

#[derive(Debug, Args, Serialize)]
struct CascadeArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated costs applied in turn, e.g. `-1,-2,-3`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    c_schedule: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "monotone")]
    mode: Mode,
    #[command(flatten)]
    sides: SideArgs,
}

#[derive(Debug, Args, Serialize)]
struct EquilibriaArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = identinet_core::game::DEFAULT_ENUMERATION_LIMIT)]
    enumerate_limit: usize,
    #[command(flatten)]
    sides: SideArgs,
}

#[derive(Debug, Args, Serialize)]
struct BlockingArgs {
    #[arg(long)]
    input: PathBuf,
    /// Restrict peeling to these individuals, e.g. `0,1,2,3,4`.
    #[arg(long, value_delimiter = ',')]
    subset: Option<Vec<usize>>,
    #[command(flatten)]
    sides: SideArgs,
}

#[derive(Debug, Args, Serialize)]
struct ScenarioArgs {
    /// Scenario config JSON; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Cafeteria-1: connect the groups with one cross edge.
    #[arg(long)]
    bridge: bool,
    /// Costs to check; a sweep over `[-(d+2), d+2]` in steps of 0.5 when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    c: Option<Vec<f64>>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
