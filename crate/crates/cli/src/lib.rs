//! The `loewner` command-line tool.
//!
//! Every subcommand reads its matrices from files (see [`format`]), runs one
//! library routine and prints a report, as text by default or as JSON under
//! `--json`. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | computed (including negative verdicts such as "incomparable") |
//! | 2 | a hypothesis of the requested statement is violated; a witness is printed |
//! | 3 | parse, usage, I/O or dimension error |
//! | 4 | numerical failure |

pub mod format;
mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use loewner::{ComplexMatrix, Error as LibError, HermitianMatrix, Tolerances};

pub use format::{parse_matrix, FormatError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Computed = 0,
    HypothesisViolated = 2,
    InputError = 3,
    NumericalFailure = 4,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Library(#[from] LibError),
    #[error("selftest: {failed} of {total} criteria failed")]
    SelftestFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Format { .. } => {
                ExitCode::InputError
            }
            CliError::SelftestFailed { .. } => ExitCode::NumericalFailure,
            CliError::Library(e) => library_exit_code(e),
        }
    }
}

/// Maps every library error onto exactly one exit code.
pub fn library_exit_code(e: &LibError) -> ExitCode {
    match e {
        LibError::NotHermitian { .. }
        | LibError::NotPsd { .. }
        | LibError::NotCommuting { .. }
        | LibError::HypothesisViolated { .. } => ExitCode::HypothesisViolated,
        LibError::DimensionMismatch { .. }
        | LibError::EmptyMatrix
        | LibError::NonFinite { .. }
        | LibError::DimensionTooLarge { .. }
        | LibError::InvalidTolerance(_) => ExitCode::InputError,
        LibError::NonConvergence { .. } | LibError::SingularIteration | LibError::SingularP => {
            ExitCode::NumericalFailure
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "loewner",
    version,
    about = "PSD square roots, Loewner order and simultaneous diagonalization"
)]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Relative eigenvalue floor for PSD and order verdicts.
    #[arg(long = "tau-psd", global = true, value_name = "TAU")]
    tau_psd: Option<f64>,
    /// Relative equality tolerance.
    #[arg(long = "tau-eq", global = true, value_name = "TAU")]
    tau_eq: Option<f64>,
    /// Jacobi sweep cap.
    #[arg(long = "max-sweeps", global = true, value_name = "N")]
    max_sweeps: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// PSD square root and the residual |(sqrt A)^2 - A|_F.
    Sqrtm { file: PathBuf },
    /// PSD certificate: smallest eigenvalue, threshold and witness.
    CheckPsd { file: PathBuf },
    /// Loewner order in both directions.
    Order { a: PathBuf, b: PathBuf },
    /// Commutator norms of (A, B) and (sqrt A, B) for PSD A.
    Commute { a: PathBuf, b: PathBuf },
    /// Congruence P with P* A P and P* B P diagonal, for PSD A and B.
    Congruence { a: PathBuf, b: PathBuf },
    /// Rank, determinant, trace, inverse and square-root comparisons for A >= B >= 0.
    Report { a: PathBuf, b: PathBuf },
    /// Runs the seeded property corpora.
    #[command(hide = true)]
    Selftest {
        #[arg(long, env = "LOEWNER_SEED", value_parser = parse_seed)]
        seed: Option<u64>,
        /// Restrict to these criteria (1 to 8).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
        criterion: Vec<u8>,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed `{s}`: {e}"))
}

/// What one invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub(crate) struct Context {
    pub json: bool,
    pub tol: Tolerances,
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: ExitCode::InputError.code(),
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: ExitCode::Computed.code(),
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut stdout = String::new();
    let result = tolerances(&cli).and_then(|tol| {
        let cx = Context {
            json: cli.json,
            tol,
        };
        dispatch(&cx, &cli.command, &mut stdout)
    });
    match result {
        Ok(code) => Outcome {
            code: code.code(),
            stdout,
            stderr: String::new(),
        },
        Err(e) => {
            let code = e.exit_code();
            let stderr = report::error_text(&e);
            if cli.json {
                stdout.push_str(&report::error_json(&e, code));
            }
            Outcome {
                code: code.code(),
                stdout,
                stderr,
            }
        }
    }
}

fn tolerances(cli: &Cli) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    if let Some(psd) = cli.tau_psd {
        tol.psd = psd;
    }
    if let Some(eq) = cli.tau_eq {
        tol.eq = eq;
    }
    if let Some(sweeps) = cli.max_sweeps {
        tol.max_sweeps = sweeps;
    }
    tol.validate()?;
    Ok(tol)
}

fn dispatch(cx: &Context, command: &Command, out: &mut String) -> Result<ExitCode, CliError> {
    match command {
        Command::Sqrtm { file } => report::sqrtm(cx, &read_hermitian(file, cx)?, out),
        Command::CheckPsd { file } => report::check_psd(cx, &read_hermitian(file, cx)?, out),
        Command::Order { a, b } => {
            let (a, b) = read_pair(a, b, cx)?;
            report::order(cx, &a, &b, out)
        }
        Command::Commute { a, b } => {
            let hermitian = read_hermitian(a, cx)?;
            let other = read_matrix(b)?;
            same_dim(hermitian.dim(), other.dim())?;
            report::commute(cx, &hermitian, &other, out)
        }
        Command::Congruence { a, b } => {
            let (a, b) = read_pair(a, b, cx)?;
            report::congruence(cx, &a, &b, out)
        }
        Command::Report { a, b } => {
            let (a, b) = read_pair(a, b, cx)?;
            report::monotonicity(cx, &a, &b, out)
        }
        Command::Selftest { seed, criterion } => {
            let seed = seed.unwrap_or(loewner::selftest::DEFAULT_SEED);
            report::selftest(cx, seed, criterion, out)
        }
    }
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_matrix(&bytes).map_err(|source| CliError::Format {
        path: path.to_owned(),
        source,
    })
}

fn read_hermitian(path: &Path, cx: &Context) -> Result<HermitianMatrix, CliError> {
    Ok(HermitianMatrix::new(read_matrix(path)?, &cx.tol)?)
}

fn read_pair(
    a: &Path,
    b: &Path,
    cx: &Context,
) -> Result<(HermitianMatrix, HermitianMatrix), CliError> {
    let a = read_hermitian(a, cx)?;
    let b = read_hermitian(b, cx)?;
    same_dim(a.dim(), b.dim())?;
    Ok((a, b))
}

fn same_dim(expected: usize, found: usize) -> Result<(), CliError> {
    if expected != found {
        return Err(LibError::DimensionMismatch { expected, found }.into());
    }
    Ok(())
}
