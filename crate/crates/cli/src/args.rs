use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use snapshot_lab::{DynamicsMode, Order};

#[derive(Debug, Parser)]
#[command(
    name = "snapshot-lab",
    version,
    about = "Decide and certify linear-threshold diffusion snapshots"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the dynamics from a seed, or replay a certificate.
    Simulate(SimulateArgs),
    /// Decide feasibility and print a certificate.
    Solve(SolveArgs),
    /// List every feasible snapshot for the graph and a budget.
    Enumerate(EnumerateArgs),
    /// Build a reduced instance from a target-set or snapshot instance.
    Reduce(ReduceArgs),
    /// Check structural lemmas on random instances, or replay the example corpus.
    Verify(VerifyArgs),
    /// Solve a clique instance with the preprocessing rules.
    Clique(CliqueArgs),
    /// Solve every instance in a directory and write a CSV table.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Simultaneous,
    Sequential,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Dynamics for instance files that omit them.
#[derive(Debug, Args)]
pub struct ModeArgs {
    #[arg(long, value_enum)]
    pub order: Option<OrderArg>,
    #[arg(long, action = clap::ArgAction::Set)]
    pub monotone: Option<bool>,
}

impl ModeArgs {
    /// `None` when neither flag is given; a missing half defaults to
    /// simultaneous order or monotone dynamics.
    pub fn mode(&self) -> Option<DynamicsMode> {
        if self.order.is_none() && self.monotone.is_none() {
            return None;
        }
        let order = match self.order.unwrap_or(OrderArg::Simultaneous) {
            OrderArg::Simultaneous => Order::Simultaneous,
            OrderArg::Sequential => Order::Sequential,
        };
        Some(DynamicsMode {
            order,
            monotone: self.monotone.unwrap_or(true),
        })
    }
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Configurations stored per seed in sequential searches.
    #[arg(long)]
    pub max_states: Option<usize>,
    /// Step cap for simultaneous runs (default min(2^n, 10^6)).
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Worker threads for seed enumeration.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Comma-separated seed labels.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub seed: Vec<String>,
    /// Comma-separated labels selected in turn (sequential dynamics).
    #[arg(long, value_delimiter = ',', conflicts_with = "replay")]
    pub ordering: Option<Vec<String>>,
    /// Certificate or solve output to replay.
    #[arg(long, conflicts_with = "seed")]
    pub replay: Option<PathBuf>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[command(flatten)]
    pub mode: ModeArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[command(flatten)]
    pub mode: ModeArgs,
    /// Include wall-clock time in the report.
    #[arg(long)]
    pub timing: bool,
    /// Also write a Graphviz rendering with snapshot and seed highlighted.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Budget to enumerate for; defaults to the instance budget.
    #[arg(long)]
    pub budget: Option<usize>,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[command(flatten)]
    pub mode: ModeArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GadgetArg {
    Embed,
    Dummy,
    Seqk1,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long, value_enum)]
    pub gadget: GadgetArg,
    #[arg(long)]
    pub instance: PathBuf,
    /// Target dynamics of the embedding (monotone only).
    #[command(flatten)]
    pub mode: ModeArgs,
    /// Where to write the reduced instance (stdout when omitted and no check).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Decide both sides and print an equivalence verdict.
    #[arg(long)]
    pub check: bool,
    #[command(flatten)]
    pub limits: LimitArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Lemma to check, or `all`.
    #[arg(long, conflicts_with = "corpus", required_unless_present = "corpus")]
    pub lemma: Option<String>,
    /// Replay the example corpus; a directory may be given instead of the bundled one.
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    pub corpus: Option<String>,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = 3)]
    pub min_n: usize,
    #[arg(long, default_value_t = 7)]
    pub max_n: usize,
    #[arg(long, default_value_t = 2)]
    pub max_k: usize,
    #[arg(long, default_value_t = 0.5)]
    pub edge_prob: f64,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Directory receiving one instance file per violation.
    #[arg(long, default_value = "violations")]
    pub violations_dir: PathBuf,
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct CliqueArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Include the rule reports.
    #[arg(long)]
    pub explain: bool,
    /// Apply the outside-threshold rule in its unrestricted form (may be wrong).
    #[arg(long)]
    pub literal_p2: bool,
    #[command(flatten)]
    pub mode: ModeArgs,
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub dir: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Dynamics for files that omit them.
    #[command(flatten)]
    pub mode: ModeArgs,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Add a wall-time column.
    #[arg(long)]
    pub timing: bool,
}
