//! `maxtheta`: lattice theta functions, energies and verification suites from the shell.
//!
//! Exit status is 0 on success, 1 when a verification suite fails and 2 on
//! invalid usage or parameters.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maxtheta_core::{Flavor, PatchKind, Potential};

use output::{Format, OutputSpec};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] maxtheta_core::Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("verification failed")]
    VerificationFailed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::VerificationFailed => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "maxtheta", version, about = "Centered and alternating lattice theta functions")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Write records to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Significant digits printed, 4 to 17.
    #[arg(long, global = true, env = "MAXTHETA_PRECISION", default_value_t = 12)]
    precision: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one theta function.
    Theta(ThetaArgs),
    /// Grid scan of a theta function over the right half of the fundamental domain.
    Scan(ScanArgs),
    /// Lattice energies and Epstein zeta values.
    Energy(EnergyArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Move a lattice parameter into the fundamental domain.
    Reduce(LatticeArgs),
    /// Finite point configurations.
    #[command(subcommand)]
    Pointset(PointsetCommand),
}

#[derive(Debug, Args)]
struct LatticeArgs {
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    #[arg(long)]
    y: f64,
}

#[derive(Debug, Args)]
struct ThetaArgs {
    #[arg(long)]
    flavor: Flavor,
    #[command(flatten)]
    lattice: LatticeArgs,
    #[arg(long)]
    alpha: f64,
    /// Shift components for the shifted and character flavors.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    xi: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    eta: f64,
    /// Sum in the given basis (plain, alternating, shifted and character only).
    #[arg(long)]
    no_reduce: bool,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    flavor: Flavor,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 200)]
    nx: usize,
    #[arg(long, default_value_t = 200)]
    ny: usize,
    #[arg(long, default_value_t = 4.0)]
    ymax: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnergyKind {
    Pm,
    C,
    EpsteinPm,
    EpsteinC,
    Epstein,
    Rocksalt,
    Madelung3d,
}

#[derive(Debug, Args)]
struct EnergyArgs {
    #[arg(value_enum)]
    kind: EnergyKind,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    #[arg(long)]
    y: Option<f64>,
    /// Distance exponent of `|v|^-s`.
    #[arg(long)]
    s: Option<f64>,
    /// Potential of squared distance: `pow:s=..`, `gauss:t=..` or `measure:[(t,w),..]`.
    #[arg(long)]
    pot: Option<Potential>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// Ewald splitting parameter.
    #[arg(long, default_value_t = 1.0)]
    split: f64,
    #[arg(long)]
    no_reduce: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Constants,
    Bounds,
    Lemma1,
    Lemma2,
    Scan,
    Negativity,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exhaustive,
    Anneal,
}

#[derive(Debug, Subcommand)]
enum PointsetCommand {
    /// Delaunay triangles of a configuration.
    Delaunay {
        #[arg(long)]
        file: PathBuf,
    },
    /// Optimal neutral charge assignment.
    Charges {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        pot: Potential,
        #[arg(long, value_enum, default_value = "exhaustive")]
        method: Method,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Minimal energy over the Delaunay midpoints.
    Center {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        pot: Potential,
    },
    /// Unit-density lattice points in a disc.
    Patch {
        #[arg(long)]
        kind: PatchKind,
        #[arg(long = "R", alias = "radius")]
        radius: f64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = OutputSpec::new(cli.format, cli.out, cli.precision)?;
    let (doc, verdict) = match cli.command {
        Command::Theta(a) => (commands::theta(&a)?, Ok(())),
        Command::Scan(a) => (commands::scan(&a)?, Ok(())),
        Command::Energy(a) => (commands::energy(&a)?, Ok(())),
        Command::Verify(a) => commands::verify(&a, out.format)?,
        Command::Reduce(a) => (commands::reduce(&a)?, Ok(())),
        Command::Pointset(c) => (commands::pointset(&c)?, Ok(())),
    };
    out.write(&doc)?;
    verdict
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::VerificationFailed) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
