//! Command-line experiments on two-qubit discord and interferometric
//! visibility. The binary is a thin wrapper around [`run`].

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub mod artifacts;
mod commands;
pub mod error;
pub mod source;
pub mod statefile;

pub use error::CliError;
pub use source::StateSource;

/// Seed used when neither `--seed` nor `DISCORDLAB_SEED` is given.
pub const DEFAULT_SEED: u64 = 0xD15C0D;

#[derive(Debug, Parser)]
#[command(
    name = "discordlab",
    version,
    about = "Two-qubit discord and zero-visibility experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Numerically minimized discord of a state.
    Discord(DiscordArgs),
    /// Exact visibility map over (alpha, beta) with zero-line extraction.
    Vismap(VismapArgs),
    /// Measurement counts of the protocol against tomography.
    CompareCosts(CostArgs),
    /// Finite-shot protocol run and/or tomography.
    Simulate(SimulateArgs),
    /// Write a state file.
    State(StateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Ppm,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Root seed (decimal or 0x-prefixed hex).
    #[arg(long, env = "DISCORDLAB_SEED", default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    #[serde(skip)]
    pub outdir: PathBuf,
    /// Run directory suffix; defaults to the current UNIX time.
    #[arg(long)]
    #[serde(skip)]
    pub stamp: Option<String>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Format::Csv, Format::Ppm, Format::Json])]
    pub format: Vec<Format>,
}

impl Common {
    pub fn wants(&self, f: Format) -> bool {
        self.format.contains(&f)
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    }
    .map_err(|_| format!("not a 64-bit seed: {s:?}"))
}

fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DiscordArgs {
    /// werner:<c>, maximally-mixed, singlet, product:<a>;<b>, zd:<seed>, random:<seed>, file:<path>
    #[arg(long)]
    #[serde(serialize_with = "serialize_display")]
    pub state: StateSource,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VismapArgs {
    #[arg(long)]
    #[serde(serialize_with = "serialize_display")]
    pub state: StateSource,
    /// Points per axis on [0, pi].
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phia: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phib: f64,
    /// Zero-visibility threshold (default 1e-9).
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

/// A single `n` or an inclusive range `a..b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub start: u64,
    pub end: u64,
}

impl FromStr for NRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("expected N or A..B with 1 <= A <= B, got {s:?}");
        let (a, b) = match s.split_once("..") {
            Some((a, b)) => (
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ),
            None => {
                let n = s.trim().parse().map_err(|_| bad())?;
                (n, n)
            }
        };
        if a == 0 || a > b {
            return Err(bad());
        }
        Ok(NRange { start: a, end: b })
    }
}

impl std::fmt::Display for NRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CostArgs {
    #[arg(long, default_value_t = 100)]
    pub m: u64,
    /// Grid points per parameter: N or A..B.
    #[arg(long, default_value = "2..20")]
    #[serde(serialize_with = "serialize_display")]
    pub n: NRange,
    #[arg(long, default_value_t = 2)]
    pub da: u32,
    #[arg(long, default_value_t = 2)]
    pub db: u32,
    #[command(flatten)]
    pub common: Common,
}

/// Shots per setting: a positive integer or `inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotsArg(pub discordlab_core::shots::Shots);

impl FromStr for ShotsArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use discordlab_core::shots::Shots;
        match s.trim() {
            "inf" | "exact" => Ok(ShotsArg(Shots::Exact)),
            t => match t.parse::<u64>() {
                Ok(m) if m >= 1 => Ok(ShotsArg(Shots::Finite(m))),
                _ => Err(format!(
                    "shots must be a positive integer or `inf`, got {s:?}"
                )),
            },
        }
    }
}

impl std::fmt::Display for ShotsArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            discordlab_core::shots::Shots::Exact => f.write_str("inf"),
            discordlab_core::shots::Shots::Finite(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    Protocol,
    Tomography,
    Both,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    #[serde(serialize_with = "serialize_display")]
    pub state: StateSource,
    /// Shots per setting, or `inf` for noiseless expectations.
    #[arg(long, default_value = "1000")]
    #[serde(serialize_with = "serialize_display")]
    pub m: ShotsArg,
    /// Grid points per protocol parameter.
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = SimMode::Both)]
    pub mode: SimMode,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phia: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phib: f64,
    /// Zero-visibility threshold (default three standard errors, 3/sqrt(m)).
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub override_resource_guard: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[arg(long)]
    pub state: StateSource,
    /// Destination file.
    #[arg(long)]
    pub out: PathBuf,
}

/// What a successful command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    /// Run directory, if the command writes one.
    pub dir: Option<PathBuf>,
    /// Human-readable summary for stdout.
    pub summary: String,
}

/// Parses `args` (including the program name) and runs the command.
///
/// Parse failures come back as `clap::Error`, which carries exit code 2.
pub fn run<I, T>(args: I) -> Result<Result<Outcome, CliError>, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    Ok(execute(&cli.command))
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Discord(a) => commands::discord(a),
        Command::Vismap(a) => commands::vismap(a),
        Command::CompareCosts(a) => commands::compare_costs(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::State(a) => commands::state(a),
    }
}
