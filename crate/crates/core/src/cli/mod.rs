//! The `symdyn` command line.
//!
//! Every command prints a structured text report (see [`report`]) to stdout
//! or to `--report`. Exit codes: 0 completed (whatever the verdict), 2 input
//! error, 3 length cap or budget exceeded.

mod commands;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::sensitivity::SensError;
use crate::setcalc::SetError;
use crate::shiftspace::ShiftError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

impl From<ShiftError> for CliError {
    fn from(e: ShiftError) -> Self {
        match e {
            ShiftError::LengthCap { .. } => CliError::Cap(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<SetError> for CliError {
    fn from(e: SetError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SensError> for CliError {
    fn from(e: SensError) -> Self {
        match e {
            SensError::Shift(s) => s.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "symdyn", version, about = "Finite-horizon symbolic dynamics experiments")]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Morse,
    Eta,
    Nmorse,
    Combination,
    Debruijn,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Inf,
    T,
    S,
    Ps,
    Pubd,
    Lbd1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Paper,
    Scaled,
}

/// Family selection plus the finite parameters its witness needs.
#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    /// Gap bound for s / ps.
    #[arg(long = "gap")]
    pub gap: Option<usize>,
    /// Interval length for t / ps.
    #[arg(long)]
    pub l: Option<usize>,
    /// Window length for pubd / lbd1.
    #[arg(long)]
    pub w: Option<usize>,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub min_density: Option<String>,
    #[arg(long)]
    pub tail_start: Option<usize>,
}

/// A WindowedSet from a file or from a seeded random generator.
#[derive(Debug, Clone, Args)]
pub struct SetSource {
    #[arg(long, conflicts_with = "random")]
    pub set: Option<PathBuf>,
    /// Horizon of a random set.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value = "1/2")]
    pub fill: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a sequence file.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, short)]
        out: PathBuf,
        /// Length of morse / periodic words.
        #[arg(long)]
        length: Option<usize>,
        /// Radius of a two-sided morse / eta window.
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long, default_value_t = 2)]
        q: usize,
        /// Substitution power or construction level.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "paper")]
        mode: Mode,
        /// de Bruijn order.
        #[arg(long)]
        order: Option<usize>,
        /// Period of a periodic word, as digits.
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long, default_value_t = 1 << 26)]
        max_len: usize,
    },
    /// Test a set against a Furstenberg family and sweep densities.
    Famtest {
        #[command(flatten)]
        source: SetSource,
        #[command(flatten)]
        family: FamilyArgs,
        /// Comma-separated window lengths; powers of two by default.
        #[arg(long, value_delimiter = ',')]
        schedule: Vec<usize>,
    },
    /// Upper and lower Banach density per window length.
    Bd {
        #[command(flatten)]
        source: SetSource,
        #[arg(long, value_delimiter = ',')]
        schedule: Vec<usize>,
    },
    /// Broken sensitivity witnesses for each (cylinder, l) pair.
    Senswitness {
        #[arg(long)]
        host: PathBuf,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        delta: String,
        /// Index set F as a set file.
        #[arg(long, conflicts_with = "f_range")]
        f: Option<PathBuf>,
        /// Index set F as `a..b` (inclusive).
        #[arg(long)]
        f_range: Option<String>,
        #[arg(long = "l", required = true, num_args = 1..)]
        ls: Vec<usize>,
        #[arg(long = "cylinder", required = true, num_args = 1..)]
        cylinders: Vec<String>,
        #[arg(long, default_value_t = 64)]
        max_m: usize,
        #[arg(long, default_value_t = 4096)]
        max_offsets: usize,
        /// Also test F itself against this family (reported next to each witness).
        #[arg(long, value_enum)]
        f_family: Option<FamilyName>,
        #[arg(long)]
        f_family_w: Option<usize>,
        #[arg(long)]
        f_family_gap: Option<usize>,
        #[arg(long)]
        f_family_l: Option<usize>,
    },
    /// Family recurrence of a lockstep product of hosts.
    Recur {
        #[arg(long = "host", required = true, num_args = 1..)]
        hosts: Vec<PathBuf>,
        #[arg(long = "cylinder", required = true, num_args = 1..)]
        cylinders: Vec<String>,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        horizon: usize,
        /// Write the visit set here.
        #[arg(long)]
        emit_set: Option<PathBuf>,
    },
    /// Orbit-distance evidence for a pair of points.
    Pairs {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        horizon: usize,
        /// Start of the tail; defaults to H/2.
        #[arg(long)]
        tail_start: Option<usize>,
    },
    /// Thickness of N([W1], [W2]) in the orbit closure of a host.
    Nuv {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        horizon: usize,
    },
    /// Minimum share of constant length-n factors over long windows.
    Coverage {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        min_len: usize,
        /// Compare against 1 - 3/(b-1).
        #[arg(long)]
        gap_base: Option<u64>,
    },
    /// Merge reports into a bundle, a CSV and a plot-data file.
    Merge {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
}

/// Runs one parsed invocation, writing the report to `stdout` unless
/// `--report` is given.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = commands::execute(cli.command)?;
    match cli.report {
        Some(path) => write_file(&path, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Input(format!("stdout: {e}"))),
    }
}

/// Parses `args`, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match run(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub(crate) fn write_file(path: &std::path::Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}
