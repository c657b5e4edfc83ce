//! `lorenz`: Lorenz curve estimation from the command line.

mod commands;
mod output;

use std::fmt;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lorenz_core::Error;

use output::Format;

#[derive(Parser)]
#[command(name = "lorenz", version, about = "Estimate Lorenz curves from Gini indices, tail shares or decile data")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Decimal places for every numeric column (table and csv output).
    #[arg(long, global = true, env = "LORENZ_PRECISION")]
    precision: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form estimate of (P, k) from a Gini index and one tail-share pair.
    Simple(SimpleArgs),
    /// Least-squares fit to decile shares.
    Fit(FitArgs),
    /// Weighted and Kakwani fits side by side.
    Compare(SourceArgs),
    /// Plot-ready (x, y) points of a curve.
    Curve(CurveArgs),
    /// Gini index of a parametrized curve.
    Gini(GiniArgs),
    /// Full evaluation: closed-form estimates at 10% and 5% tails, both fits
    /// and their comparison.
    Report(ReportArgs),
    /// Print the built-in four-country dataset.
    Dataset(DatasetArgs),
}

#[derive(Args)]
struct SimpleArgs {
    #[arg(long)]
    gini: f64,
    /// Tail size, e.g. 0.10 for the bottom and top 10%.
    #[arg(long)]
    m: f64,
    /// Income share of the bottom m.
    #[arg(long)]
    bottom: f64,
    /// Income share of the top m.
    #[arg(long)]
    top: f64,
    /// Published bottom/top ratio; overrides bottom/top in the estimate.
    #[arg(long)]
    ratio: Option<f64>,
    /// Grouped CSV with the actual decile shares to compare against.
    #[arg(long)]
    actual: Option<PathBuf>,
    /// Record to take from --actual when it holds several.
    #[arg(long, requires = "actual")]
    country: Option<String>,
    /// Clamp an out-of-range k into [0, 1] instead of failing.
    #[arg(long)]
    clamp: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Grouped CSV file, `-` for standard input.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Use the built-in four-country dataset.
    #[arg(long)]
    builtin: bool,
}

#[derive(Args)]
struct SourceArgs {
    #[command(flatten)]
    source: Source,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Weighted,
    Kakwani,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Cumulative,
    Shares,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Cumulative)]
    objective: ObjectiveArg,
}

#[derive(Args)]
struct ModelParams {
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    params: ModelParams,
    /// Weighted model only: estimate (P, k) from a Gini index and tail
    /// shares instead of giving them.
    #[arg(long, conflicts_with_all = ["p", "k"], requires_all = ["m", "bottom", "top"])]
    gini: Option<f64>,
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    bottom: Option<f64>,
    #[arg(long)]
    top: Option<f64>,
    #[arg(long, default_value_t = 101)]
    samples: usize,
    /// Add the line of equality as a third column.
    #[arg(long)]
    with_diagonal: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GiniMethodArg {
    Closed,
    Quadrature,
    Beta,
    Trapezoid,
}

#[derive(Args)]
struct GiniArgs {
    #[command(flatten)]
    params: ModelParams,
    /// Defaults to closed for the weighted model and beta for Kakwani.
    #[arg(long, value_enum)]
    method: Option<GiniMethodArg>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ReportSource {
    /// Use the built-in four-country dataset.
    #[arg(long)]
    paper: bool,
    /// Grouped CSV file, `-` for standard input.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    source: ReportSource,
}

#[derive(Args)]
struct DatasetArgs {
    /// Only the record for this country.
    #[arg(long)]
    country: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::KOutOfBounds { .. } | Error::DegenerateRatio { .. } => 3,
                Error::NonConvergence { .. } | Error::NoFit => 4,
                _ => 2,
            },
        }
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let sections = match cli.command {
        Command::Simple(args) => commands::simple(args)?,
        Command::Fit(args) => commands::fit(args)?,
        Command::Compare(args) => commands::compare(args)?,
        Command::Curve(args) => commands::curve(args)?,
        Command::Gini(args) => commands::gini(args)?,
        Command::Report(args) => commands::report(args)?,
        Command::Dataset(args) => {
            return commands::dataset(args, cli.format, cli.precision, out);
        }
    };
    output::emit(out, &sections, cli.format, cli.precision)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(CliError::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Core(Error::Io(e))) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lorenz: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
