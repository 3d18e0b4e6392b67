//! `cae`: combined asymptotic expansions from the command line.
//!
//! Exit status is 0 on success, 1 on usage, schema or IO errors, and 2 when a
//! computation reports infeasibility or a validation check fails.

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

#[derive(Parser, Debug)]
#[command(name = "cae", version, about = "Combined asymptotic expansions at turning points")]
struct Cli {
    /// Write a version sidecar `<out>.stamp.json` (stderr without --out).
    #[arg(long, global = true)]
    stamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Combined expansion of a turning-point equation.
    Expand(ExpandArgs),
    /// Error-scaling table against quadrature ground truth.
    Validate(ValidateArgs),
    /// Special functions of the inner equation.
    #[command(subcommand)]
    Special(SpecialCmd),
    /// Gevrey analysis of coefficient sequences.
    #[command(subcommand)]
    Gevrey(GevreyCmd),
    /// Canard values and control series.
    #[command(subcommand)]
    Canard(CanardCmd),
    /// Resonance condition and reduced inner solution.
    Resonance(ResonanceArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Side {
    Minus,
    Plus,
}

impl From<Side> for cae_core::Sign {
    fn from(s: Side) -> Self {
        match s {
            Side::Minus => cae_core::Sign::Minus,
            Side::Plus => cae_core::Sign::Plus,
        }
    }
}

#[derive(Args, Debug)]
struct ExpandArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Number of terms in powers of eta.
    #[arg(long)]
    order: usize,
    #[arg(long, value_enum, default_value = "minus")]
    side: Side,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
    orders: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025,0.0125")]
    eps: Vec<f64>,
    /// `lo:hi:intervals`.
    #[arg(long, allow_hyphen_values = true, default_value = "-1:0:64")]
    xgrid: String,
    #[arg(long, value_enum, default_value = "minus")]
    side: Side,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum SpecialCmd {
    /// `U_k^σ(x)` with its asymptotic partial sums.
    #[command(name = "U", alias = "u")]
    U(UArgs),
}

#[derive(Args, Debug)]
struct UArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    k: u32,
    #[arg(long, value_enum, default_value = "minus")]
    sigma: Side,
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    /// Largest partial sum.
    #[arg(long, default_value_t = 5)]
    terms: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GevreyCmd {
    /// Fit `|a_n| ≈ C L1^n Γ(n/p + 1)`.
    Fit(GevreyFitArgs),
    /// Borel–Laplace and least-term sums of a series in eta.
    Sum(GevreySumArgs),
}

#[derive(Args, Debug)]
struct GevreyFitArgs {
    /// CSV with one coefficient per row (last column used).
    #[arg(long)]
    coeffs: PathBuf,
    #[arg(long)]
    p: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GevreySumArgs {
    #[arg(long)]
    coeffs: PathBuf,
    #[arg(long)]
    p: u32,
    #[arg(long)]
    eta: f64,
    /// Borel-plane truncation radius.
    #[arg(long, default_value_t = 0.9)]
    rho: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CanardCmd {
    /// Connection constant `c_0` of the Union Jack equation.
    Unionjack(UnionJackArgs),
    /// Canard value for the angular slow curve.
    Angular(AngularArgs),
    /// Control series making every inner coefficient two-sided bounded.
    Criterion(CriterionArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BranchArg {
    Upper,
    Lower,
}

#[derive(Args, Debug)]
struct UnionJackArgs {
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value = "upper")]
    branch: BranchArg,
    #[arg(long, default_value_t = 10.0)]
    x_far: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AngularArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0.01,0.02,0.04")]
    eps: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CriterionArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Number of control coefficients in powers of eta.
    #[arg(long)]
    order: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ResonanceArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long)]
    p: u32,
    /// Points for the Riccati residual.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-10,-5,-3,3,5,10")]
    grid: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    pub fn failed(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn io(e: impl Display) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<cae_core::Error> for CliError {
    fn from(e: cae_core::Error) -> Self {
        match e {
            cae_core::Error::Invalid(m) => Self::usage(m),
            other => Self::failed(other.to_string()),
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("CAE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::usage(format!("CAE_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(CliError::io)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_threads().and_then(|_| commands::run(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cae: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
