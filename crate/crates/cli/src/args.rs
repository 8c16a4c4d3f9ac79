use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mvss::coarse::Builtin;

#[derive(Debug, Parser)]
#[command(
    name = "mvss",
    version,
    about = "Spectral-sequence bookkeeping for K-theory of sums of ideals"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Bott period of the grading: 2 (complex) or 8 (real).
    #[arg(long, global = true, value_parser = parse_period)]
    pub period: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Echo the raw input on stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

fn parse_period(text: &str) -> Result<u32, String> {
    match text {
        "2" => Ok(2),
        "8" => Ok(8),
        _ => Err(format!("period must be 2 or 8, got {text:?}")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a first page, run it to E^∞ and assemble the target.
    Run(RunArgs),
    /// Smith normal form of an integer matrix.
    Snf(SnfArgs),
    /// Brute-force coarse excision check on a lattice box.
    Excision(ExcisionArgs),
    /// Numeric checks on the standard simplex.
    Simplex {
        #[command(subcommand)]
        action: SimplexAction,
    },
    /// Run a cover family at several caps and report where results settle.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// rn:<n>, zinf:<m>, wedge:<k> or wedge:countable:<cap>.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub builtin: Option<Builtin>,
    /// JSON file holding a Mayer-Vietoris input, a first page or an ideal chain; `-` reads stdin.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Truncation cap for builtin families.
    #[arg(long, requires = "builtin")]
    pub cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SnfArgs {
    /// Nested JSON rows, e.g. `[[2,4],[6,8]]`.
    #[arg(long)]
    pub matrix: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CustomCover {
    /// `{x ≤ −gap}` and `{x ≥ gap}` on the line.
    DisjointRays,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricKind {
    D1,
    Dinf,
    Weighted,
}

#[derive(Debug, Args)]
pub struct ExcisionArgs {
    /// rn:<n> or zinf:<m>.
    #[arg(long, conflicts_with = "custom", required_unless_present = "custom")]
    pub builtin: Option<Builtin>,
    #[arg(long, value_enum)]
    pub custom: Option<CustomCover>,
    #[arg(long, default_value_t = 1)]
    pub gap: i64,
    #[arg(long, value_enum, default_value_t = MetricKind::Dinf)]
    pub metric: MetricKind,
    /// Comma-separated positive weights such as `1,3/2`; weighted metric only.
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub radius: u64,
    /// Defaults to R for dinf, nR for d1 and ⌈nR·max w / min w⌉ for weighted.
    #[arg(long)]
    pub s: Option<u64>,
    /// Box half-width; defaults to 2(R + S) + 1.
    #[arg(long = "box")]
    pub box_half: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum SimplexAction {
    /// Sample the simplex and check the cake-piece maps.
    Verify {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub builtin: Builtin,
    /// Strictly increasing caps; defaults to 1 up to the family's own cap.
    #[arg(long, value_delimiter = ',')]
    pub caps: Option<Vec<usize>>,
}
