use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use output::Format;

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 2;
    pub const INCONCLUSIVE: u8 = 3;
    pub const REFUTED: u8 = 4;
}

#[derive(Parser)]
#[command(
    name = "oddtown",
    version,
    about = "Odd-intersection statistics and exact minimum search for set families"
)]
struct Cli {
    /// Output format; `auto` prints a table on a terminal and JSON otherwise.
    #[arg(long, value_enum, global = true, default_value_t = Format::Auto)]
    format: Format,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named family and report its statistics.
    Construct(ConstructArgs),
    /// Compute statistics of a family file.
    Analyze(AnalyzeArgs),
    /// Minimize op or c(k,t) over families of a given size.
    Search(SearchArgs),
    /// Check a lower bound statement against the exact minimum.
    Verify(VerifyArgs),
    /// Validate Steiner systems and take their shadows.
    Steiner(SteinerArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    EventownA,
    EventownB,
    EventownPlus,
    Singletons,
    K4Triples,
    OddtownPlus,
    X5,
    F1,
    F2,
    SteinerPartition,
}

#[derive(Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Pick the added sets at random with this seed instead of the first ones
    /// in order.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the family file here (otherwise it goes to stdout and the
    /// report to stderr).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// List the odd-intersecting pairs (1-based member positions).
    #[arg(long)]
    pub pairs: bool,
    /// Count pairs meeting in exactly this many points (uniform families).
    #[arg(long)]
    pub ckt: Option<usize>,
    #[arg(long)]
    pub density: bool,
    /// Check the link double count (and, for k >= 4, the link op chain)
    /// for a k-uniform family.
    #[arg(long)]
    pub links: Option<usize>,
    /// Excess s used for the right-hand side of the link op chain.
    #[arg(long, default_value_t = 1)]
    pub s: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Even,
    Odd,
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Op,
    Ckt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Bnb,
    Local,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    Auto,
    On,
    Off,
}

#[derive(Args, Clone)]
pub struct EngineArgs {
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, env = "ODDTOWN_BUDGET_NODES")]
    pub budget_nodes: Option<u64>,
    #[arg(long, env = "ODDTOWN_BUDGET_SECS")]
    pub budget_secs: Option<u64>,
    /// Fix the smallest member to {1..c}; `auto` enables it for even classes
    /// with n >= 6.
    #[arg(long, value_enum, default_value_t = Toggle::Auto)]
    pub symmetry: Toggle,
    #[arg(long)]
    pub no_conflict_bound: bool,
    #[arg(long)]
    pub no_deficiency_bound: bool,
}

#[derive(Args)]
pub struct SearchArgs {
    #[arg(long, value_enum)]
    pub class: ClassArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    /// Member size for the uniform class.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Op)]
    pub objective: ObjectiveArg,
    /// Intersection size counted by the ckt objective.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Bnb)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub restarts: usize,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Write a resumable progress file after the run.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Continue from a progress file written by `--checkpoint`.
    #[arg(long)]
    pub resume: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StatementArg {
    ThmEven,
    ThmOdd,
    ConjEven,
    ConjOdd,
    ProbUniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExactModeArg {
    Exhaustive,
    Bnb,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub statement: StatementArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub s: usize,
    /// Member size for prob-uniform.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = ExactModeArg::Bnb)]
    pub mode: ExactModeArg,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["validate", "partition"])))]
pub struct SteinerArgs {
    /// Steiner block file to validate.
    #[arg(long)]
    pub validate: Option<PathBuf>,
    /// Use the partition of [n] into 4-blocks.
    #[arg(long, requires = "n")]
    pub partition: bool,
    #[arg(long)]
    pub n: Option<usize>,
    /// Take the k-shadow of the blocks.
    #[arg(long)]
    pub shadow: Option<usize>,
    /// Write the shadow as a family file.
    #[arg(long, requires = "shadow")]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let outcome = match &cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Search(a) => commands::search(a),
        Command::Verify(a) => commands::verify(a),
        Command::Steiner(a) => commands::steiner(a),
    };
    match outcome {
        Ok(report) => {
            if let Err(e) = report.emit(cli.format) {
                eprintln!("error: {e}");
                return ExitCode::from(exit::USAGE);
            }
            ExitCode::from(report.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::USAGE)
        }
    }
}
