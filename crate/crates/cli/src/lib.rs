//! Command-line front end for `qgames-core`.
//!
//! Exit codes: 0 success, 2 invalid input, 3 unmet precondition (for example
//! `--zero-sum` on a game that is not zero-sum), 4 enumeration cap exceeded.

pub mod game;
pub mod ising;
pub mod report;
pub mod series;
pub mod spinflip;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::report::{Format, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    ResourceCap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::ResourceCap(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qgames",
    version,
    about = "Quantum games and Ising-chain trading analysis"
)]
pub struct Cli {
    /// Output format.
    #[arg(
        long,
        global = true,
        value_enum,
        env = "QMG_FORMAT",
        default_value = "json"
    )]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play the quantum spin-flip game, or scan its two-move equilibria.
    Spinflip(SpinflipArgs),
    /// Analyze a finite two-player game.
    #[command(subcommand)]
    Game(GameCommand),
    /// Optimal trading strategies as Ising-chain ground states.
    #[command(subcommand)]
    Ising(IsingCommand),
}

#[derive(Debug, Args)]
pub struct SpinflipArgs {
    /// Re(a) of Q's first move U(a, b).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a_im: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub b_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub b_im: f64,
    /// Re(a) of Q's last move; the last move repeats the first unless any
    /// `--a2-*`/`--b2-*` flag is given, with omitted parts taken as 0.
    #[arg(long, allow_hyphen_values = true)]
    pub a2_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a2_im: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b2_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b2_im: Option<f64>,
    /// Picard's flip probability.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Scan the two-move equilibrium condition instead of playing.
    #[arg(long)]
    pub equilibria: bool,
    /// Points per axis for `--equilibria`.
    #[arg(long, default_value_t = 11)]
    pub grid: usize,
}

#[derive(Debug, Subcommand)]
pub enum GameCommand {
    /// Dominant strategies, pure Nash equilibria and Pareto outcomes.
    Analyze {
        /// JSON game document.
        file: PathBuf,
        /// Also solve for mixed equilibria (2x2 games only).
        #[arg(long)]
        mixed: bool,
        /// Also compute the zero-sum value (2-row zero-sum games only).
        #[arg(long)]
        zero_sum: bool,
    },
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    /// CSV of prices, one per line, optionally preceded by a timestamp column.
    #[arg(long, conflicts_with = "returns", required_unless_present = "returns")]
    pub prices: Option<PathBuf>,
    /// CSV of precomputed log returns in the same layout.
    #[arg(long)]
    pub returns: Option<PathBuf>,
    /// Transaction cost per switch.
    #[arg(long, allow_hyphen_values = true)]
    pub j: f64,
}

#[derive(Debug, Subcommand)]
pub enum IsingCommand {
    /// Ground state and potential ground states.
    Optimize {
        #[command(flatten)]
        series: SeriesArgs,
        /// Energy slack for near-optimal strategies.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        eps: f64,
    },
    /// Free energy, mean energy and occupations at inverse temperature beta.
    Thermo {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
    },
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn with_series<T>(
    args: &SeriesArgs,
    f: impl FnOnce(ising::Source<'_>) -> Result<T, CliError>,
) -> Result<T, CliError> {
    match (&args.prices, &args.returns) {
        (Some(path), None) => f(ising::Source::Prices(&read(path)?)),
        (None, Some(path)) => f(ising::Source::Returns(&read(path)?)),
        _ => Err(CliError::Input(
            "give exactly one of --prices or --returns".into(),
        )),
    }
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Spinflip(a) if a.equilibria => spinflip::equilibria_report(a.grid),
        Command::Spinflip(a) => spinflip::play_report(spinflip::PlayArgs {
            a: (a.a_re, a.a_im),
            b: (a.b_re, a.b_im),
            a2: (a.a2_re, a.a2_im),
            b2: (a.b2_re, a.b2_im),
            p: a.p,
        }),
        Command::Game(GameCommand::Analyze {
            file,
            mixed,
            zero_sum,
        }) => game::analyze(
            &read(file)?,
            game::AnalyzeOptions {
                mixed: *mixed,
                zero_sum: *zero_sum,
            },
        ),
        Command::Ising(IsingCommand::Optimize { series, eps }) => {
            with_series(series, |s| ising::optimize(s, series.j, *eps))
        }
        Command::Ising(IsingCommand::Thermo { series, beta }) => {
            with_series(series, |s| ising::thermo(s, series.j, *beta))
        }
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the report or diagnostic. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(report) => match out.write_all(report.render(cli.format).as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: cannot write output: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
