use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monenv_core::branching::{DEFAULT_EPSILON_FRACTION, DEFAULT_TOLERANCE};

/// Envelopes, hulls, volumes and branching points of bounded monomials over
/// a linear wedge.
#[derive(Debug, Parser)]
#[command(name = "monenv", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived constants of the instance and an identity self-check.
    Params(Common),
    /// Evaluate f and both envelopes at a point.
    Eval(EvalArgs),
    /// Membership test against one of the convex sets.
    Check(CheckArgs),
    /// Hull volume (two variables), optionally cross-checked by oracles.
    Volume(VolumeArgs),
    /// Branching point on the ratio x_j/x_i or on the value z.
    Branch(BranchArgs),
    /// Points on level sets f = xi inside the wedge.
    Levelset(LevelsetArgs),
    /// Wedge hull versus McCormick gap on a grid (bilinear instances).
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Instance file (JSON); `-` reads standard input.
    #[arg(short, long, value_name = "FILE")]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated point coordinates.
    #[arg(
        short = 'x',
        long = "point",
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub point: Vec<f64>,
    /// Also test (x, z) for membership in the tightest available set.
    #[arg(long)]
    pub with_z: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetName {
    Hull,
    #[value(name = "Y", alias = "y")]
    Y,
    Upper,
    Lower,
    Orthant,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(
        short = 'x',
        long = "point",
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub point: Vec<f64>,
    /// Height of the point; not needed for `--set Y`.
    #[arg(short, long, allow_hyphen_values = true)]
    pub z: Option<f64>,
    #[arg(long, value_enum)]
    pub set: SetName,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleSpec {
    Quadrature,
    MonteCarlo { seed: u64, samples: u64 },
}

impl FromStr for OracleSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "quad" {
            return Ok(Self::Quadrature);
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["mc", seed, samples] => Ok(Self::MonteCarlo {
                seed: seed
                    .parse()
                    .map_err(|e| format!("bad seed {seed:?}: {e}"))?,
                samples: samples
                    .parse()
                    .map_err(|e| format!("bad sample count {samples:?}: {e}"))?,
            }),
            _ => Err(format!("expected `quad` or `mc:SEED:N`, got {s:?}")),
        }
    }
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Cross-check: `quad` or `mc:SEED:N`. May be repeated.
    #[arg(long, value_name = "ORACLE")]
    pub oracle: Vec<OracleSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Criterion {
    Balanced,
    Minvol,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Ratio,
    Value,
    Both,
}

#[derive(Debug, Args)]
pub struct BranchArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub criterion: Criterion,
    #[arg(long = "on", value_enum, default_value_t = Family::Both)]
    pub family: Family,
    /// Relative tolerance of the search.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Fraction of the branch interval excluded at each end (minvol only).
    #[arg(long, default_value_t = DEFAULT_EPSILON_FRACTION)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
pub struct LevelsetArgs {
    #[arg(short, long, value_name = "FILE")]
    pub instance: PathBuf,
    /// Comma-separated levels.
    #[arg(long, value_delimiter = ',', required = true)]
    pub xi: Vec<f64>,
    /// Points per level set, end points included.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,
    /// Grid cells per axis.
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
}
