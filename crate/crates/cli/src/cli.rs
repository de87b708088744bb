use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact small-time heat-trace invariants and spectral checks for `-Δ + V`.
#[derive(Debug, Parser)]
#[command(name = "heatrace", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact coefficients c_α for index tuples or an order sweep.
    Coeff(CoeffArgs),
    /// Assembled invariants of a range of orders, optionally evaluated on a potential.
    Invariants(InvariantsArgs),
    /// Heat-trace difference z(t), with Duhamel terms when configured.
    Trace(ConfigArgs),
    /// Least-squares fit of the small-t expansion of z(t).
    Fit(ConfigArgs),
    /// Gap between the Dirichlet trace and its periodic partner.
    Boundary(BoundaryArgs),
    /// Run the verification suites and write a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Run configuration (TOML, or JSON when the name ends in .json).
    #[arg(short, long)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    #[command(flatten)]
    pub common: Common,
    /// Index tuple, entries separated by `;` and coordinates by `,`, e.g. "2,0;0,2". Repeatable.
    #[arg(short, long = "tuple")]
    pub tuples: Vec<String>,
    /// Sweep all tuples of this many multi-indices (needs --dimension and --order).
    #[arg(long, requires_all = ["dimension", "order"])]
    pub sweep: Option<usize>,
    #[arg(long)]
    pub dimension: Option<usize>,
    /// Total derivative order |α| of the sweep.
    #[arg(long)]
    pub order: Option<u32>,
    /// Cap on |α| + 2j.
    #[arg(long)]
    pub budget: Option<u32>,
    /// Compare two-slot tuples against the two-time recurrence.
    #[arg(long)]
    pub cross_check: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub min_order: Option<u32>,
    #[arg(long)]
    pub max_order: Option<u32>,
    #[arg(long)]
    pub dimension: Option<usize>,
    #[arg(long)]
    pub budget: Option<u32>,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Run configuration (TOML, or JSON when the name ends in .json).
    #[arg(short, long)]
    pub config: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[command(flatten)]
    pub run: ConfigArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Add the spectral fits, Duhamel bounds and boundary-gap runs.
    #[arg(long)]
    pub numeric: bool,
    /// JSON coefficient table replacing the built-in reference values.
    #[arg(long)]
    pub table: Option<PathBuf>,
}
