use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use olx_core::resonator::moments::DEFAULT_N_CUTOFF;

/// Finite real; accepts scientific notation.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// Non-negative integer; `1e6` style is accepted when exact.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.trim().parse::<u64>() {
        return Ok(n);
    }
    let v = parse_real(s)?;
    if v < 0.0 || v.fract() != 0.0 || v > 9_007_199_254_740_992.0 {
        return Err(format!("`{s}` is not a non-negative integer"));
    }
    Ok(v as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "olx", version, about = "Euler products, resonance bounds and scans of |F(1+it)|")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// zeta, zeta^<m>, dedekind:<d> or rs-delta:<N>
    #[arg(long, default_value = "zeta")]
    pub model: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Truncated products at s = 1 against the Mertens prediction.
    #[command(group(ArgGroup::new("cutoffs").args(["x", "x_grid"])))]
    Mertens {
        #[command(flatten)]
        common: Common,
        /// Single cutoff (default 1e6 when no grid is given).
        #[arg(long, value_parser = parse_real)]
        x: Option<f64>,
        /// Increasing cutoffs, comma separated.
        #[arg(long = "x-grid", value_parser = parse_real, value_delimiter = ',')]
        x_grid: Option<Vec<f64>>,
    },
    /// Residue at s = 1 computed from its series or product.
    Residue {
        #[command(flatten)]
        common: Common,
    },
    /// Resonance product, its factorization and the asymptotic bound.
    #[command(group(ArgGroup::new("height").args(["t_height", "resonator_x"]).required(true)))]
    Resonance {
        #[command(flatten)]
        common: Common,
        #[arg(long = "T", value_parser = parse_real)]
        t_height: Option<f64>,
        /// Resonator length, bypassing X(T).
        #[arg(long = "X", value_parser = parse_real)]
        resonator_x: Option<f64>,
    },
    /// Moment integrals by lattice series and by quadrature.
    Moments {
        #[command(flatten)]
        common: Common,
        #[arg(long = "X", value_parser = parse_real, default_value = "20")]
        resonator_x: f64,
        #[arg(long = "T", value_parser = parse_real, default_value = "5000")]
        t_height: f64,
        #[arg(long = "n-cutoff", value_parser = parse_count, default_value_t = DEFAULT_N_CUTOFF)]
        n_cutoff: u64,
        /// Coarsest quadrature step; the result uses step/4.
        #[arg(long, value_parser = parse_real, default_value = "0.05")]
        step: f64,
    },
    /// F(1+it; Y) at one point with the direct oracles.
    Evaluate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_real, allow_negative_numbers = true)]
        t: f64,
        #[arg(long = "Y", value_parser = parse_real, default_value = "1e6")]
        y: f64,
    },
    /// Seeded comparison of F(1+it; Y) with F(1+it).
    Calibrate {
        #[command(flatten)]
        common: Common,
        #[arg(long = "t-min", value_parser = parse_real, default_value = "100", allow_negative_numbers = true)]
        t_min: f64,
        #[arg(long = "t-max", value_parser = parse_real, default_value = "1000", allow_negative_numbers = true)]
        t_max: f64,
        #[arg(long = "Y", value_parser = parse_real, default_value = "1e6")]
        y: f64,
        #[arg(long, value_parser = parse_count, default_value = "100")]
        samples: u64,
        #[arg(long, value_parser = parse_count, default_value = "0")]
        seed: u64,
    },
    /// Grid scan for large |F(1+it; Y)| with refinement and bound report.
    Scan {
        #[command(flatten)]
        common: Common,
        /// Height for the bound; also sets the default interval [sqrt T, T].
        #[arg(long = "T", value_parser = parse_real)]
        t_height: Option<f64>,
        #[arg(long = "t-min", value_parser = parse_real, allow_negative_numbers = true)]
        t_min: Option<f64>,
        #[arg(long = "t-max", value_parser = parse_real, allow_negative_numbers = true)]
        t_max: Option<f64>,
        #[arg(long, value_parser = parse_real, default_value = "0.01")]
        step: f64,
        #[arg(long = "Y", value_parser = parse_real, default_value = "1e5")]
        y: f64,
        #[arg(long = "top-k", value_parser = parse_count, default_value = "10")]
        top_k: u64,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Mertens { common, .. }
            | Command::Residue { common }
            | Command::Resonance { common, .. }
            | Command::Moments { common, .. }
            | Command::Evaluate { common, .. }
            | Command::Calibrate { common, .. }
            | Command::Scan { common, .. } => common,
        }
    }
}
