use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "fractalts", version, about = "Fractal and multifractal analysis of time series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate h(q), H and Δh for one or more series.
    Analyze(AnalyzeArgs),
    /// Emit log F_q(τ) against log τ for plotting.
    Fluct(FluctArgs),
    /// Lagged cross-correlation of two date-aligned series.
    Xcorr(XcorrArgs),
    /// Write a synthetic series with known scaling.
    Generate(GenerateArgs),
    /// Re-run the invocation recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Kind {
    WhiteNoise,
    Fgn,
    Cascade,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    pub q_min: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub q_max: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q_step: f64,
    /// Detrending polynomial order m.
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    /// Smallest scale [default: max(order + 2, 10)].
    #[arg(long)]
    pub tau_min: Option<usize>,
    /// Largest scale [default: length / 4].
    #[arg(long)]
    pub tau_max: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub tau_count: usize,
    /// Smallest scale entering the regression.
    #[arg(long)]
    pub fit_min: Option<usize>,
    /// Largest scale entering the regression.
    #[arg(long)]
    pub fit_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Input CSV; repeat for several series.
    #[arg(long, required = true)]
    pub input: Vec<PathBuf>,
    /// Value column (header name or 0-based index).
    #[arg(long, default_value = "value")]
    pub column: String,
    #[arg(long)]
    pub date_column: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FluctArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "value")]
    pub column: String,
    #[arg(long)]
    pub date_column: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct XcorrArgs {
    /// The two input CSVs, in order a then b.
    #[arg(long, num_args = 1, required = true)]
    pub input: Vec<PathBuf>,
    /// Value column, once for both inputs or once per input.
    #[arg(long, default_value = "value")]
    pub column: Vec<String>,
    #[arg(long, default_value = "date")]
    pub date_column: String,
    #[arg(long, default_value_t = fractalts_core::xcorr::DEFAULT_MAX_LAG)]
    pub max_lag: usize,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Target Hurst exponent (fgn).
    #[arg(long, default_value_t = 0.7)]
    pub h: f64,
    /// Cascade weight in (0, 0.5].
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
    /// Cascade depth; the series has 2^levels points.
    #[arg(long, default_value_t = 14)]
    pub levels: u32,
    /// Number of points (white_noise, fgn).
    #[arg(long, default_value_t = 8192)]
    pub length: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Output directory [default: the manifest's directory].
    #[arg(long)]
    pub out: Option<PathBuf>,
}
