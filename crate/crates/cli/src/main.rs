//! `avn` — verification workflows for the single-photon all-versus-nothing
//! argument, exposed as subcommands with text, JSON, and CSV reports.
//!
//! Exit codes are a stable contract for CI use:
//! 0 = success / verification passed, 1 = usage or resource error,
//! 2 = a verification check failed. Output is fully deterministic: no
//! randomness, no timestamps, identical flags produce identical bytes.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use avn_core::analysis::{gap_sweep, independence_checks};
use avn_core::constraints::{constraint_set, verify_constraints, DEFAULT_TOLERANCE};
use avn_core::lhv::verify_theorem;
use avn_core::statevector::build_w_state;
use clap::{Args, Parser, Subcommand, ValueEnum};

mod render;

#[derive(Parser)]
#[command(
    name = "avn",
    version,
    about = "Verify the all-versus-nothing argument for a single photon over n sites",
    long_about = "Builds the single-excitation state over n sites, checks its \
zero-probability constraints, exhaustively censuses all 4^n deterministic local \
models against them, and contrasts the surviving models' certainty that all X \
outcomes agree with the quantum value n/2^(n-1)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that every zero-probability constraint vanishes on the state
    VerifyConstraints(VerifyConstraintsArgs),
    /// Enumerate all 4^n deterministic local models and census the survivors
    VerifyTheorem(VerifyTheoremArgs),
    /// Tabulate the local-versus-quantum gap for the all-X-equal event
    Gap(GapArgs),
    /// Run the remote-setting and remote-outcome independence diagnostics
    Independence(IndependenceArgs),
    /// Print the generated constraint list without evaluating it
    EmitConstraints(EmitConstraintsArgs),
}

#[derive(Args)]
struct VerifyConstraintsArgs {
    /// Number of sites (at least 2, so the pair families are nonempty)
    #[arg(long)]
    n: usize,
    /// Largest acceptable probability for an asserted zero
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Drop the all-sites-empty constraint from the generated set
    #[arg(long = "no-completeness", action = clap::ArgAction::SetFalse)]
    completeness: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyTheoremArgs {
    /// Number of sites (enumeration examines 4^n models; capped at 12)
    #[arg(long)]
    n: usize,
    /// Drop the all-sites-empty constraint from the generated set
    #[arg(long = "no-completeness", action = clap::ArgAction::SetFalse)]
    completeness: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GapArgs {
    /// Smallest site count in the sweep
    #[arg(long = "n-min", default_value_t = 2)]
    n_min: usize,
    /// Largest site count in the sweep
    #[arg(long = "n-max", default_value_t = 20)]
    n_max: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct IndependenceArgs {
    /// Number of sites (at least 2)
    #[arg(long)]
    n: usize,
    /// Largest acceptable deviation in the marginalization identities
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EmitConstraintsArgs {
    /// Number of sites
    #[arg(long)]
    n: usize,
    /// Drop the all-sites-empty constraint from the generated set
    #[arg(long = "no-completeness", action = clap::ArgAction::SetFalse)]
    completeness: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to a file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

/// A rendered report plus its verification verdict.
#[derive(Debug)]
struct Report {
    body: String,
    passed: bool,
}

#[derive(Debug)]
enum CliError {
    Core(avn_core::Error),
    Io(std::io::Error),
    Csv(csv::Error),
    Json(serde_json::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Io(e) => write!(f, "cannot write report: {e}"),
            CliError::Csv(e) => write!(f, "cannot render CSV: {e}"),
            CliError::Json(e) => write!(f, "cannot render JSON: {e}"),
        }
    }
}

impl From<avn_core::Error> for CliError {
    fn from(e: avn_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFICATION_FAILED: u8 = 2;

/// Final exit status of a run that produced a report.
fn verdict_code(passed: bool) -> u8 {
    if passed {
        0
    } else {
        EXIT_VERIFICATION_FAILED
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            return match err.kind() {
                // --help and --version are successful runs.
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{err}");
                    ExitCode::from(EXIT_USAGE)
                }
            };
        }
    };

    let (report, output) = match run(cli) {
        Ok(pair) => pair,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let written = match output {
        Some(path) => fs::write(&path, &report.body)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{}", report.body);
            Ok(())
        }
    };
    if let Err(message) = written {
        eprintln!("error: {message}");
        return ExitCode::from(EXIT_USAGE);
    }

    ExitCode::from(verdict_code(report.passed))
}

fn run(cli: Cli) -> Result<(Report, Option<PathBuf>), CliError> {
    match cli.command {
        Command::VerifyConstraints(args) => {
            let report = cmd_verify_constraints(&args)?;
            Ok((report, args.output.output))
        }
        Command::VerifyTheorem(args) => {
            let report = cmd_verify_theorem(&args)?;
            Ok((report, args.output.output))
        }
        Command::Gap(args) => {
            let report = cmd_gap(&args)?;
            Ok((report, args.output.output))
        }
        Command::Independence(args) => {
            let report = cmd_independence(&args)?;
            Ok((report, args.output.output))
        }
        Command::EmitConstraints(args) => {
            let report = cmd_emit_constraints(&args)?;
            Ok((report, args.output.output))
        }
    }
}

fn cmd_verify_constraints(args: &VerifyConstraintsArgs) -> Result<Report, CliError> {
    if args.n < 2 {
        return Err(avn_core::Error::TooFewSites { n: args.n, min: 2 }.into());
    }
    let state = build_w_state(args.n)?;
    let constraints = constraint_set(args.n, args.completeness)?;
    let report = verify_constraints(&state, &constraints, args.tolerance)?;
    let body = match args.output.format {
        Format::Text => render::constraint_report_text(&report),
        Format::Json => render::to_json(&report)?,
        Format::Csv => render::constraint_report_csv(&report)?,
    };
    Ok(Report {
        body,
        passed: report.passed,
    })
}

fn cmd_verify_theorem(args: &VerifyTheoremArgs) -> Result<Report, CliError> {
    let report = verify_theorem(args.n, args.completeness)?;
    let body = match args.output.format {
        Format::Text => render::theorem_report_text(&report),
        Format::Json => render::to_json(&report)?,
        Format::Csv => render::theorem_survivors_csv(&report)?,
    };
    Ok(Report {
        body,
        passed: report.all_survivors_x_uniform,
    })
}

fn cmd_gap(args: &GapArgs) -> Result<Report, CliError> {
    let rows = gap_sweep(args.n_min, args.n_max)?;
    let body = match args.output.format {
        Format::Text => render::gap_text(&rows),
        Format::Json => render::to_json(&rows)?,
        Format::Csv => render::gap_csv(&rows)?,
    };
    Ok(Report { body, passed: true })
}

fn cmd_independence(args: &IndependenceArgs) -> Result<Report, CliError> {
    let report = independence_checks(args.n, args.tolerance)?;
    let body = match args.output.format {
        Format::Text => render::independence_text(&report),
        Format::Json => render::to_json(&report)?,
        Format::Csv => render::independence_csv(&report)?,
    };
    Ok(Report {
        body,
        passed: report.passed,
    })
}

fn cmd_emit_constraints(args: &EmitConstraintsArgs) -> Result<Report, CliError> {
    let constraints = constraint_set(args.n, args.completeness)?;
    let body = match args.output.format {
        Format::Text => render::constraint_list_text(&constraints),
        Format::Json => render::to_json(&constraints)?,
        Format::Csv => render::constraint_list_csv(&constraints)?,
    };
    Ok(Report { body, passed: true })
}
