use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use saddle_core::{parse_rational, Rational};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "saddle", version, about = "Exact saddle values, witnesses and certificates for p:-q resonant saddles")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub output: Format,
    /// Leave the wall time out of the report, making it byte-for-byte reproducible.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Saddle values L_1..L_K of a system document.
    SaddleValues(SaddleValuesArgs),
    /// Saddle values of a perturbation family as jets in eps, against the extracted linear part.
    Linearize(LinearizeArgs),
    /// d, n1, N1, N2, the s_j table and the row indices (i_m, j_m, l_m).
    ResonanceData(Pqn),
    /// The coefficient matrix A of the linearized saddle values.
    Matrix(MatrixArgs),
    /// A witness system of first-order saddle order (n^2 - 1)/d.
    Witness(WitnessArgs),
    /// First-order ideal non-membership certificate.
    Certificate(CertificateArgs),
    /// Multiplies a system by 1 + x^r and compares saddle orders.
    Lift(LiftArgs),
    /// Checks that a homogeneous system has L_k = 0 whenever n1 does not divide k.
    VerifyHomo(VerifyHomoArgs),
    /// Runs the acceptance suite.
    Selftest(SelftestArgs),
    /// Runs many commands in parallel, one report file per job.
    Batch(BatchArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SaddleValues(_) => "saddle-values",
            Command::Linearize(_) => "linearize",
            Command::ResonanceData(_) => "resonance-data",
            Command::Matrix(_) => "matrix",
            Command::Witness(_) => "witness",
            Command::Certificate(_) => "certificate",
            Command::Lift(_) => "lift",
            Command::VerifyHomo(_) => "verify-homo",
            Command::Selftest(_) => "selftest",
            Command::Batch(_) => "batch",
        }
    }
}

pub fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    Nf,
    Integral,
    Both,
}

#[derive(Debug, Args, Serialize)]
pub struct Pqn {
    pub p: u64,
    pub q: u64,
    pub n: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct SaddleValuesArgs {
    #[arg(long)]
    #[serde(skip)]
    pub input: PathBuf,
    /// Largest k; defaults to n1 (n + 2) for homogeneous input, else 12.
    #[arg(long)]
    pub max_order: Option<u32>,
    #[arg(long, value_enum, default_value_t = MethodChoice::Both)]
    pub method: MethodChoice,
}

#[derive(Debug, Args, Serialize)]
pub struct LinearizeArgs {
    #[arg(long)]
    #[serde(skip)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 12)]
    pub max_order: u32,
    /// Jet order in eps.
    #[arg(long, env = "SADDLE_JET_ORDER", default_value_t = 1)]
    pub jet: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct MatrixArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub pqn: Pqn,
    /// Specialize U = f + mu g at this rational.
    #[arg(long, value_parser = rational, conflicts_with = "symbolic")]
    #[serde(serialize_with = "ser_opt_rat")]
    pub mu: Option<Rational>,
    /// Entries as polynomials in mu (the default).
    #[arg(long)]
    pub symbolic: bool,
    /// Seed of the randomized fallback for g.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct WitnessArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub pqn: Pqn,
    #[arg(long, value_parser = rational, default_value = "1/100")]
    #[serde(serialize_with = "ser_rat")]
    pub eps: Rational,
    /// Jet order of the transcript.
    #[arg(long, env = "SADDLE_JET_ORDER", default_value_t = 1)]
    pub jet: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Allow n < p + q + 3; the report is flagged.
    #[arg(long)]
    pub allow_below_gate: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CertificateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub pqn: Pqn,
    /// Certificate for general (non-homogeneous) nonlinearities of degree n.
    #[arg(long)]
    pub general: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct LiftArgs {
    #[arg(long)]
    #[serde(skip)]
    pub input: PathBuf,
    #[arg(long)]
    pub r: u32,
    /// Largest k compared; defaults as for saddle-values on the input.
    #[arg(long)]
    pub max_order: Option<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyHomoArgs {
    #[arg(long)]
    #[serde(skip)]
    pub input: PathBuf,
    #[arg(long)]
    pub max_order: Option<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct SelftestArgs {
    /// Comma-separated criterion numbers; all when absent.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct BatchArgs {
    /// One job per line: the arguments of a saddle command. Blank lines and `#` comments are skipped.
    #[arg(long)]
    #[serde(skip)]
    pub jobs: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    pub out_dir: PathBuf,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

fn ser_rat<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&saddle_core::format_rational(r))
}

fn ser_opt_rat<S: serde::Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => ser_rat(r, s),
        None => s.serialize_none(),
    }
}
