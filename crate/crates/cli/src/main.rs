mod commands;
mod output;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cyclesync", version, about = "Random-matrix analysis of business-cycle synchronisation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full-sample eigenvalues, noise band, mode classes and loadings.
    Spectrum(DataArgs),
    /// Rolling-window share of the largest eigenvalue.
    Rolling(RollingArgs),
    /// Average-linkage clustering of the correlation matrix.
    Cluster(ClusterArgs),
    /// Kolmogorov-Smirnov comparison of two subsets' rolling fractions.
    Compare(CompareArgs),
    /// Monte Carlo check of the Marchenko-Pastur law.
    Mpcheck(MpcheckArgs),
    /// Growth-rate panel as CSV (readable again with --input).
    Growth(DataArgs),
    /// Write the bundled synthetic eight-economy level dataset.
    Synth(SynthArgs),
    /// Recompute the published eight-economy figures side by side.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct DataArgs {
    /// CSV of quarterly levels, first column YYYYQn.
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated labels; all columns when omitted.
    #[arg(long, value_delimiter = ',')]
    countries: Vec<String>,
    #[arg(long, value_enum, default_value_t = Growth::YoyPercent)]
    growth: Growth,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Clone)]
struct WindowArgs {
    /// Window length in quarters.
    #[arg(long, default_value_t = cyclesync::rolling::DEFAULT_WINDOW)]
    window: usize,
    #[arg(long, value_enum, default_value_t = Scope::Window)]
    standardize: Scope,
}

#[derive(Args)]
struct RollingArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    window: WindowArgs,
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_enum, default_value_t = Metric::RowsEuclidean)]
    metric: Metric,
    /// Also write the tree in Newick format to this file.
    #[arg(long)]
    newick: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    window: WindowArgs,
    /// Second subset, compared against --countries.
    #[arg(long, value_delimiter = ',', required = true)]
    against: Vec<String>,
}

#[derive(Args)]
struct MpcheckArgs {
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    t: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    window: WindowArgs,
    #[arg(long, default_value = "US")]
    us: String,
    #[arg(long, default_value = "UK")]
    uk: String,
    #[arg(long, default_value = "FR")]
    france: String,
    #[arg(long, default_value = "BE")]
    belgium: String,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Growth {
    YoyPercent,
    LogDiff,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Scope {
    Window,
    WholeSample,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Metric {
    RowsEuclidean,
    CorrelationDistance,
}

impl From<Growth> for cyclesync::GrowthMethod {
    fn from(g: Growth) -> Self {
        match g {
            Growth::YoyPercent => cyclesync::GrowthMethod::YoyPercent,
            Growth::LogDiff => cyclesync::GrowthMethod::LogDiff,
        }
    }
}

impl From<Scope> for cyclesync::StandardizationScope {
    fn from(s: Scope) -> Self {
        match s {
            Scope::Window => cyclesync::StandardizationScope::Window,
            Scope::WholeSample => cyclesync::StandardizationScope::WholeSample,
        }
    }
}

/// Failure categories, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

impl From<cyclesync::Error> for CliError {
    fn from(e: cyclesync::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

macro_rules! from_core {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                cyclesync::Error::from(e).into()
            }
        }
    )*};
}
from_core!(
    cyclesync::IngestError,
    cyclesync::RmtError,
    cyclesync::RollingError,
    cyclesync::ClusterError,
    cyclesync::StatsError
);

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Rolling(a) => commands::rolling(a),
        Command::Cluster(a) => commands::cluster(a),
        Command::Compare(a) => commands::compare(a),
        Command::Mpcheck(a) => commands::mpcheck(a),
        Command::Growth(a) => commands::growth(a),
        Command::Synth(a) => commands::synth(a),
        Command::Reproduce(a) => reproduce::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
