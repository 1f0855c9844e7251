use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use etascan_core::{primes::MAX_LIMIT, ComplexScalar, Precision};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "etascan",
    version,
    about = "Numerical checks of the theta(t) - floor(t) Mellin identities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sieve primes up to --x-limit and store them in the cache directory.
    SieveCache,
    /// Compare the zeta-side closed form with E(s0) + Delta(s0) from truncated integrals.
    VerifyLemma1,
    /// Tabulate (s - 1/2) Delta(s) at s = 0.60, 0.55, 0.52.
    VerifyResidue,
    /// Compute E^(n)(s0), lambda_n and the decay fit for n = 0..=n-max.
    TheoremScan {
        #[arg(long, value_enum, default_value_t = RouteArg::Closed)]
        route: RouteArg,
    },
    /// Compare E^(n)(s0) from the integral and contour routes for n <= min(n-max, 10).
    CrossValidate,
    /// Write the jumps of theta, psi or delta as (abscissa, cumulative value).
    DumpSteps {
        #[arg(long, value_enum)]
        which: WhichStep,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SieveCache => "sieve-cache",
            Command::VerifyLemma1 => "verify-lemma1",
            Command::VerifyResidue => "verify-residue",
            Command::TheoremScan { .. } => "theorem-scan",
            Command::CrossValidate => "cross-validate",
            Command::DumpSteps { .. } => "dump-steps",
        }
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Center s0 as "re" or "re,im".
    #[arg(long, global = true, default_value = "3", value_parser = parse_complex, allow_hyphen_values = true)]
    pub s0: ComplexScalar,

    /// Disk radius h; defaults to the middle of the admissible range.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub h: Option<f64>,

    /// Sieve limit X.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(2..=MAX_LIMIT))]
    pub x_limit: u64,

    /// Highest derivative order.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(0..=170))]
    pub n_max: Option<u64>,

    /// Contour radius; defaults to min(2.2, 0.88 |s0 - 1/2|).
    #[arg(long, global = true, value_parser = parse_positive)]
    pub radius: Option<f64>,

    /// Contour sample count (power of two).
    #[arg(long, global = true, default_value_t = 512, value_parser = parse_power_of_two)]
    pub samples: usize,

    #[arg(long, global = true, value_enum, default_value_t = PrecisionArg::Double)]
    pub precision: PrecisionArg,

    #[arg(long, global = true, default_value = ".etascan-cache")]
    pub cache_dir: PathBuf,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrecisionArg {
    Double,
    DoubleDouble,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::Double => Precision::Double,
            PrecisionArg::DoubleDouble => Precision::DoubleDouble,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteArg {
    Closed,
    Integral,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WhichStep {
    Theta,
    Psi,
    Delta,
}

pub fn parse_complex(text: &str) -> Result<ComplexScalar, String> {
    let mut parts = text.split(',');
    let mut next = |what: &str| -> Result<Option<f64>, String> {
        parts
            .next()
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("bad {what} part {p:?}: {e}"))
                    .and_then(|v| {
                        if v.is_finite() {
                            Ok(v)
                        } else {
                            Err(format!("{what} part must be finite"))
                        }
                    })
            })
            .transpose()
    };
    let re = next("real")?.ok_or("empty value")?;
    let im = next("imaginary")?.unwrap_or(0.0);
    if parts.next().is_some() {
        return Err(format!("expected \"re\" or \"re,im\", got {text:?}"));
    }
    Ok(ComplexScalar::new(re, im))
}

fn parse_positive(text: &str) -> Result<f64, String> {
    let v: f64 = text.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive and finite, got {v}"))
    }
}

fn parse_power_of_two(text: &str) -> Result<usize, String> {
    let v: usize = text.parse().map_err(|e| format!("{e}"))?;
    if v >= 4 && v.is_power_of_two() && v <= 1 << 20 {
        Ok(v)
    } else {
        Err(format!("must be a power of two in [4, 2^20], got {v}"))
    }
}
