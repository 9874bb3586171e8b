use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(name = "rqcm", version, about = "Second-moment spectra and spectral gaps of random quantum circuits")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format; each command picks its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Tolerance: unitarity for `gate`, spectrum matching for `spectrum`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Seed for randomized checks and random gates.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads for scans and validation.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// JSON file supplying any flag; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArchArg {
    Local,
    #[value(alias = "brick-wall")]
    #[serde(alias = "brick-wall")]
    Brickwall,
    DomainWall,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entanglement profile, solvability residual and moment block of a two-qudit gate.
    Gate(GateArgs),
    /// Closed-form spectrum on the solvable line, optionally checked against dense diagonalisation.
    Spectrum(SpectrumArgs),
    /// Spectral gap over a grid of (e, g).
    Scan(ScanArgs),
    /// Frame potential of a circuit or of the domain-wall chain.
    FramePotential(FrameArgs),
    /// Run the cross-check suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct GateArgs {
    /// Canonical qubit parameters `a,b,c`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub canonical: Option<Vec<f64>>,

    /// JSON gate file: `{"d": .., "entries": [[re, im], ..]}` or `{"canonical": [a, b, c]}`.
    #[arg(long)]
    pub file: Option<PathBuf>,

    /// Draw a Haar-random gate of this local dimension.
    #[arg(long)]
    pub random: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CircuitArgs {
    #[arg(short = 'n', long = "sites")]
    pub n: Option<usize>,

    #[arg(short = 'd', long = "dim")]
    pub d: Option<usize>,

    #[arg(long, value_enum)]
    pub arch: Option<ArchArg>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,

    #[arg(long = "e", allow_hyphen_values = true)]
    pub e: Option<f64>,

    /// Defaults to the solvable line.
    #[arg(long = "g", allow_hyphen_values = true)]
    pub g: Option<f64>,

    /// Also diagonalise the dense moment matrix and match the two spectra.
    #[arg(long)]
    pub numeric: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,

    /// `min:max` for the entangling power.
    #[arg(long)]
    pub e_range: Option<String>,

    /// `min:max` for the typicality.
    #[arg(long)]
    pub g_range: Option<String>,

    /// Points per axis.
    #[arg(long)]
    pub resolution: Option<usize>,

    /// Also emit closed-form and dense gaps along the solvable line.
    #[arg(long)]
    pub solvable_line: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FrameArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,

    #[arg(long = "e", allow_hyphen_values = true)]
    pub e: Option<f64>,

    #[arg(long = "g", allow_hyphen_values = true)]
    pub g: Option<f64>,

    #[arg(long)]
    pub t_max: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ValidateArgs {
    #[arg(value_enum)]
    pub level: Option<LevelArg>,

    /// Scale the dispersion hopping term to confirm the suite catches it.
    #[arg(long)]
    pub tamper_dispersion: Option<f64>,
}
