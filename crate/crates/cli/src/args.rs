use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "mcsa",
    version,
    about = "Induction-motor fault diagnosis from stator-current recordings"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Spacing of the fractional-order grid on [0, 1].
    #[arg(long, global = true, default_value_t = 0.01, value_name = "STEP")]
    pub grid_step: f64,
    #[arg(long, global = true, value_enum, default_value_t = RneModeArg::Magnitude)]
    pub rne_mode: RneModeArg,
    /// Shorthand for `--rne-mode complex`.
    #[arg(long, global = true)]
    pub complex_rne: bool,
    #[arg(long, global = true, default_value_t = 0.3)]
    pub healthy_max: f64,
    #[arg(long, global = true, default_value_t = 0.5)]
    pub faulty_min: f64,
    #[arg(long, global = true, value_enum, default_value_t = WindowArg::Rect)]
    pub window: WindowArg,
    /// Report path. The JSON report goes to stdout when omitted.
    #[arg(long, short, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Add `timestamp_unix` to reports.
    #[arg(long, global = true)]
    pub timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RneModeArg {
    Magnitude,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    Rect,
    Hann,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum, broken-bar sidebands, severity and THD of one recording.
    Analyze(AnalyzeArgs),
    /// Relative-norm-error curve and verdict for a reference/candidate pair.
    Diagnose(DiagnoseArgs),
    /// Write a synthetic recording from a preset or a simulator config file.
    Simulate(SimulateArgs),
    /// Print predicted fault frequencies.
    Signatures(SignaturesArgs),
}

#[derive(Debug, Args)]
pub struct MotorArgs {
    /// Motor config file (`key = value` lines).
    #[arg(long, short, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Override or supply one config key, e.g. `--set slip=0.197`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub motor: MotorArgs,
    /// Highest broken-bar sideband index.
    #[arg(long, default_value_t = 2)]
    pub k_max: u32,
    /// Search half-width around each predicted sideband, Hz.
    #[arg(long, default_value_t = 1.5)]
    pub tolerance: f64,
    /// Sidebands weaker than this (dB re fundamental) count as absent.
    #[arg(long, default_value_t = -50.0, allow_negative_numbers = true)]
    pub floor_db: f64,
    #[arg(long, default_value_t = 10)]
    pub max_harmonic: u32,
    /// `frequency_hz,magnitude` CSV; defaults to `<output>.spectrum.csv`.
    #[arg(long, value_name = "FILE")]
    pub spectrum_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    /// Reference capture (the `x` in ‖y - x‖/‖x‖).
    pub reference: PathBuf,
    pub candidate: PathBuf,
    /// `order,rne` CSV; defaults to `<output>.rne.csv`.
    #[arg(long, value_name = "FILE")]
    pub rne_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Preset name or simulator config file.
    pub source: String,
    pub output: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultKind {
    /// Broken rotor bar.
    Brb,
    Eccentricity,
    Stator,
    Bearing,
}

#[derive(Debug, Args)]
pub struct SignaturesArgs {
    #[arg(value_enum)]
    pub fault: FaultKind,
    #[command(flatten)]
    pub motor: MotorArgs,
    #[arg(long, default_value_t = 1)]
    pub k_max: u32,
    /// Stator-fault harmonic indices.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "1",
        allow_negative_numbers = true
    )]
    pub n: Vec<i64>,
    /// Stator-fault odd offsets.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "1",
        allow_negative_numbers = true
    )]
    pub k: Vec<i64>,
    /// Eccentricity odd offsets.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "1",
        allow_negative_numbers = true
    )]
    pub n_ws: Vec<i64>,
    /// Read the integer offsets as hertz instead of supply-frequency multiples.
    #[arg(long)]
    pub raw_hz: bool,
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}
