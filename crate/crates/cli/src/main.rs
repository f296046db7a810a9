//! `propforge`: constraint-solver-driven labeled graph dataset forge and
//! expressiveness scoring harness.
//!
//! Subcommands: `generate` and `perturb` build the dataset families,
//! `check` evaluates properties on concrete graphs, `split` emits the
//! train/test categories, `score` computes unified/relative score tables,
//! and `stats` exposes the brute-force oracle and CNF export.

mod commands;
mod sizespec;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::CliError;
use propforge_datagen::generator::Family;

#[derive(Parser)]
#[command(name = "propforge", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate labeled datasets (random family by default).
    Generate(GenerateArgs),
    /// Generate the perturbation-paired family (alias for
    /// `generate --family perturb`).
    Perturb(GenerateArgs),
    /// Evaluate a property on concrete graphs.
    Check(CheckArgs),
    /// Emit train/test split manifests and the 95/5 row partition.
    Split(SplitArgs),
    /// Compute unified and relative score tables from accuracy results.
    Score(ScoreArgs),
    /// Brute-force counts, differential solver checks, and CNF export.
    Stats(StatsArgs),
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Property name, comma list, or `all16`.
    #[arg(long)]
    property: String,
    /// `random`, `perturb`, or `both`.
    #[arg(long, default_value = "random")]
    family: String,
    /// Size range: `base..base+10`, `6..15`, `base+2`, or a single size.
    #[arg(long, default_value = "base..base+10")]
    sizes: String,
    /// Master seed; per-job seeds derive from it and the job coordinates.
    #[arg(long)]
    seed: u64,
    /// Output root (default: $PROPFORGE_OUT or ./datasets).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for job-level parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    /// Positives per dataset at sizes above base (M).
    #[arg(long, default_value_t = 5000)]
    positives: usize,
    /// Maximum flipped bits for perturbation pairing.
    #[arg(long, default_value_t = 2)]
    max_fbits: usize,
    #[arg(long)]
    overwrite: bool,
    /// Print the job plan without generating.
    #[arg(long)]
    dry_run: bool,
    /// Disable lex-leader symmetry breaking at the base size.
    #[arg(long)]
    no_symmetry_breaking: bool,
    /// Stop base-size enumeration at this many positives.
    #[arg(long, default_value_t = 1_000_000)]
    enumeration_cap: usize,
    /// Cap on random flip attempts per (positive, flip width).
    #[arg(long, default_value_t = 100_000)]
    attempt_cap: usize,
    /// Conflict allowance per solver operation.
    #[arg(long, default_value_t = 10_000_000)]
    conflict_budget: u64,
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Args)]
pub struct CheckArgs {
    /// Catalog property name.
    #[arg(long)]
    property: Option<String>,
    /// Inline formula text.
    #[arg(long)]
    formula: Option<String>,
    /// File holding one property formula.
    #[arg(long)]
    formula_file: Option<PathBuf>,
    /// Graph as `n:bitstring`; repeatable.
    #[arg(long)]
    graph: Vec<String>,
    /// File of `n:bitstring` lines.
    #[arg(long)]
    graph_file: Option<PathBuf>,
    /// Re-verify every label of a written dataset against the property.
    #[arg(long)]
    dataset: Option<PathBuf>,
}

#[derive(Args)]
pub struct SplitArgs {
    #[arg(long)]
    property: String,
    #[arg(long)]
    family: String,
    /// Dataset root (default: $PROPFORGE_OUT or ./datasets).
    #[arg(long)]
    root: Option<PathBuf>,
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
pub struct ScoreArgs {
    /// Results file: `model,property,aspect,gsize,accuracy` per line.
    results: PathBuf,
    /// Output directory for the tables (default: ./scores).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Test sizes per (aspect, property, model) cell.
    #[arg(long, default_value_t = 10)]
    sizes: usize,
}

#[derive(Args)]
pub struct StatsArgs {
    #[arg(long)]
    property: Option<String>,
    #[arg(long)]
    formula: Option<String>,
    /// File holding one property formula.
    #[arg(long)]
    formula_file: Option<PathBuf>,
    /// Graph size.
    #[arg(long)]
    n: usize,
    /// Exhaustive positive count and fraction (n <= 4).
    #[arg(long)]
    exact: bool,
    /// Compare brute force against SAT enumeration (n <= 4).
    #[arg(long)]
    differential: bool,
    /// Closed-form labeled fraction (total_order only).
    #[arg(long)]
    formula_only: bool,
    /// Write the grounded CNF in DIMACS form.
    #[arg(long)]
    emit_cnf: Option<PathBuf>,
    /// Ground the negation instead.
    #[arg(long)]
    negate: bool,
    /// Add lex-leader symmetry-breaking clauses to the export.
    #[arg(long)]
    symmetry_breaking: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Generate(args) => commands::cmd_generate(args, None),
        Command::Perturb(args) => commands::cmd_generate(args, Some(Family::Perturb)),
        Command::Check(args) => commands::cmd_check(args),
        Command::Split(args) => commands::cmd_split(args),
        Command::Score(args) => commands::cmd_score(args),
        Command::Stats(args) => commands::cmd_stats(args),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("error: {}", err.message);
        std::process::exit(err.code);
    }
}
