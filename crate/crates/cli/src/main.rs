mod commands;
mod failure;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use samrot::theory::DEFAULT_ORDER;

use crate::inputs::{Format, InclinationArgs, InertiaArgs, StateArgs};

#[derive(Debug, Parser)]
#[command(name = "samrot", version, about = "Short-axis-mode rotation: series theory, oracle and tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Propagate an initial state with the series theory.
    Propagate(PropagateArgs),
    /// Compare the series theory with the numerical oracle at several orders.
    Compare(CompareArgs),
    /// Level curves of the scaled full and main-problem energies.
    Contours(ContoursArgs),
    /// Regenerate the coefficient tables and diff them against a reference.
    Tables(TablesArgs),
    /// Secular frequencies and averaged energy of given mean elements.
    Frequencies(FrequenciesArgs),
    /// The built-in body catalog.
    Bodies(OutputArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct PropagateArgs {
    #[command(flatten)]
    pub inertia: InertiaArgs,
    #[command(flatten)]
    pub state: StateArgs,
    /// Truncation order of the averaging maps.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    #[arg(long = "t-end", default_value_t = 100.0, allow_negative_numbers = true)]
    pub t_end: f64,
    /// Number of equally spaced samples on [0, t-end].
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub inertia: InertiaArgs,
    #[command(flatten)]
    pub state: StateArgs,
    /// Orders to evaluate.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3, 4, 5])]
    pub orders: Vec<usize>,
    #[arg(long = "t-end", default_value_t = 100.0, allow_negative_numbers = true)]
    pub t_end: f64,
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    /// Oracle tolerance; defaults to 1e-13, or 1e-28 with --extended.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Run series and oracle in double-double arithmetic.
    #[arg(long)]
    pub extended: bool,
    /// Also run with the inclination halved and report the error ratio.
    #[arg(long)]
    pub halving: bool,
    /// Exit with status 3 unless the maximum error decreases with order.
    #[arg(long)]
    pub check: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ContoursArgs {
    #[arg(long, default_value_t = samrot::contours::FIGURE_BETA)]
    pub beta: f64,
    #[arg(long = "nm-min", default_value_t = samrot::contours::FIGURE_WINDOW.0)]
    pub nm_min: f64,
    #[arg(long = "nm-max", default_value_t = samrot::contours::FIGURE_WINDOW.1)]
    pub nm_max: f64,
    /// Energy levels; the default is the reference set of twelve.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub levels: Option<Vec<f64>>,
    /// Number of nu samples on [0, 2 pi).
    #[arg(long, default_value_t = 721)]
    pub samples: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TablesArgs {
    /// Normalization order (1..=10).
    #[arg(long, default_value_t = 10)]
    pub order: usize,
    /// Reference tables as a JSON dump; the built-in tables when absent.
    #[arg(long)]
    pub against: Option<PathBuf>,
    /// Compare against the tables as originally printed, misprints included.
    #[arg(long, conflicts_with = "against")]
    pub printed: bool,
    /// Write the built-in tables as JSON and exit without regenerating.
    #[arg(long = "dump-baked")]
    pub dump_baked: bool,
    /// Write the regenerated tables as JSON to this file.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FrequenciesArgs {
    #[command(flatten)]
    pub inertia: InertiaArgs,
    #[command(flatten)]
    pub inclination: InclinationArgs,
    /// Mean L'/G'.
    #[arg(long = "LoverG")]
    pub l_over_g: Option<f64>,
    /// Mean G' (angular momentum).
    #[arg(long = "G", default_value_t = 1.0)]
    pub big_g: f64,
    /// Mean angle l', used for the osculating N check.
    #[arg(long = "l", default_value_t = 0.0, allow_negative_numbers = true)]
    pub l: f64,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    /// Compare with the classical expansions in the minimum inclination.
    #[arg(long)]
    pub kinoshita: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome = match &cli.command {
        Command::Propagate(a) => commands::propagate(a),
        Command::Compare(a) => commands::compare(a),
        Command::Contours(a) => commands::contours(a),
        Command::Tables(a) => commands::tables(a),
        Command::Frequencies(a) => commands::frequencies(a),
        Command::Bodies(a) => commands::bodies(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            f.exit_code()
        }
    }
}
