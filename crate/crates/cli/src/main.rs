//! `symplan` command-line driver.
//!
//! Exit codes: 0 success (solved / valid), 1 negative result (unsolved /
//! invalid plan), 2 usage, input or output error.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "symplan", version, about = "Lifted planner with symmetry pruning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run GBFS on one problem.
    Solve(SolveArgs),
    /// Build training and validation datasets from optimal plans.
    GenData(GenDataArgs),
    /// Run the none/action/state/both pruning grid over a problem set.
    Ablate(AblateArgs),
    /// Check a plan file against a problem.
    Validate(ValidateArgs),
    /// Print the instance graph of a problem's initial state.
    ExportGraph(ExportGraphArgs),
    /// Write a generated fixture problem.
    Generate(GenerateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ProblemArgs {
    /// Domain file; defaults to `domain.pddl` next to the problem.
    #[arg(long, short)]
    pub domain: Option<PathBuf>,
    /// Problem file, relative to `$SYMPLAN_FIXTURES` when not found as given.
    #[arg(long, short)]
    pub problem: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// goal-count, hmax, wl or model:<weights.json>
    #[arg(long, default_value = "goal-count", value_parser = commands::parse_heuristic)]
    pub heuristic: commands::HeuristicSpec,
    /// Message-passing depth: WL rounds for wl keys, checked against a model's layer count.
    #[arg(long)]
    pub layers: Option<usize>,
    /// Decimal digits kept in embedding state keys.
    #[arg(long, default_value_t = symplan::pruning::DEFAULT_SCALE)]
    pub scale: u32,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_expansions: u64,
    /// Seconds; 0 disables the limit.
    #[arg(long, default_value_t = 300.0)]
    pub time_limit: f64,
    /// Automorphism search nodes per expansion.
    #[arg(long, default_value_t = symplan::symmetry::DEFAULT_ORBIT_BUDGET)]
    pub orbit_budget: usize,
    /// Scalar type for model evaluation.
    #[arg(long, value_enum, default_value_t = Precision::F64)]
    pub precision: Precision,
    /// Recorded in reports; the search itself is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Include wall-clock timings in reports.
    #[arg(long)]
    pub timings: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    F32,
    F64,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    /// none, action, state, both, or a comma list such as `action,state`
    #[arg(long, default_value = "none", value_parser = commands::parse_prune)]
    pub prune: commands::PruneSpec,
    /// Write the plan here.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Print the JSON report instead of the text one.
    #[arg(long)]
    pub json: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Toggle {
    On,
    Off,
}

#[derive(Args, Debug)]
pub struct GenDataArgs {
    /// Domain file for every problem; defaults to `domain.pddl` beside each.
    #[arg(long, short)]
    pub domain: Option<PathBuf>,
    /// Training problems.
    #[arg(long, num_args = 1.., required = true)]
    pub train: Vec<PathBuf>,
    /// Held-out problems for sibling records.
    #[arg(long, num_args = 1..)]
    pub validation: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Toggle::On)]
    pub augment: Toggle,
    /// Receives train.jsonl, validation.jsonl and summary.json.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_expansions: u64,
    /// Seconds per optimal solve; 0 disables the limit.
    #[arg(long, default_value_t = 300.0)]
    pub time_limit: f64,
}

#[derive(Args, Debug)]
pub struct AblateArgs {
    #[arg(long, short)]
    pub domain: Option<PathBuf>,
    /// Problem files.
    pub problems: Vec<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Write the text table here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the JSON table here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Plan file: one `(action arg ...)` per line, `;` comments.
    #[arg(long)]
    pub plan: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    /// `id color` and `u v label` lines.
    Colored,
    /// Serialized instance graph as used in datasets.
    Json,
    /// Vertices with status, class and name, then edges.
    Debug,
}

#[derive(Args, Debug)]
pub struct ExportGraphArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Apply this plan's first `--steps` actions before exporting.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    #[arg(long, requires = "plan")]
    pub steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = GraphFormat::Colored)]
    pub format: GraphFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub family: Family,
    /// Problem output; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write the domain file here.
    #[arg(long, global = true)]
    pub domain_out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    Together,
    Spread,
}

#[derive(Subcommand, Debug)]
pub enum Family {
    Gripper {
        #[arg(long)]
        balls: usize,
    },
    Blocksworld {
        #[arg(long)]
        blocks: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Spanner {
        #[arg(long)]
        spanners: usize,
        #[arg(long)]
        nuts: usize,
        #[arg(long)]
        locations: usize,
        #[arg(long, value_enum, default_value_t = Placement::Together)]
        placement: Placement,
    },
    Movie {
        #[arg(long)]
        n: usize,
    },
    Logistics {
        #[arg(long)]
        cities: usize,
        #[arg(long)]
        packages: usize,
    },
    Pairing {
        #[arg(long)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::GenData(a) => commands::gen_data(a),
        Command::Ablate(a) => commands::ablate(a),
        Command::Validate(a) => commands::validate(a),
        Command::ExportGraph(a) => commands::export_graph(a),
        Command::Generate(a) => commands::generate(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
