use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "srsqueeze", version, about = "Vacuum squeezing from polarization self-rotation")]
pub struct Cli {
    /// Atomic-constants file (TOML); the bundled ⁸⁷Rb data is used otherwise.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads for row evaluation.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for the Monte-Carlo sampler.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Phase-dependent quadrature variance after the medium.
    Quadrature(QuadratureArgs),
    /// Closed-form α, g and squeezing over a detuning sweep.
    Analytic(AnalyticArgs),
    /// Density-matrix D-line scan with hyperfine structure and Doppler averaging.
    Dm(DmArgs),
    /// Optimized squeezing as a function of the saturation parameter κ.
    KappaScan(KappaScanArgs),
    /// Buffer-gas effective rates and the optimum buffer density.
    Buffer(BufferArgs),
    /// Best detuning, density and squeezing for one set of conditions.
    Optimize(OptimizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemArg {
    /// J = 1/2 → 1/2.
    X,
    /// J = 1/2 → 3/2.
    D2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    /// Closed forms, J = 1/2 → 1/2.
    X,
    /// Closed forms, J = 1/2 → 3/2.
    D2,
    /// Density-matrix engine on a configured D line.
    Dm,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// First detuning (units of γ₀).
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    /// Last detuning (units of γ₀).
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct QuadratureArgs {
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub g_ell: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha_ell: f64,
    /// Phases spanning [0, π].
    #[arg(long, default_value_t = 181)]
    pub points: usize,
    /// Add Monte-Carlo estimates with this many samples per phase.
    #[arg(long)]
    pub samples: Option<usize>,
}

/// Saturation given directly or through beam power.
#[derive(Debug, Clone, Args)]
pub struct DriveArgs {
    #[arg(long, conflicts_with = "power")]
    pub kappa: Option<f64>,
    /// Ground relaxation γ/γ₀ when κ is given.
    #[arg(long, default_value_t = 1e-3)]
    pub gamma_ratio: f64,
    /// Light power (W); with the beam diameter and temperature this fixes κ.
    #[arg(long)]
    pub power: Option<f64>,
    /// Beam diameter (m).
    #[arg(long, default_value_t = 100e-6)]
    pub beam_diameter: f64,
    /// Vapour temperature (K), for the transit rate.
    #[arg(long, default_value_t = 373.0)]
    pub temperature: f64,
    /// Configured line supplying λ and γ₀ [default: d1 for x, d2 for d2].
    #[arg(long)]
    pub line: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyticArgs {
    #[arg(long, value_enum, default_value_t = SystemArg::X)]
    pub system: SystemArg,
    #[command(flatten)]
    pub drive: DriveArgs,
    /// Atomic density (m⁻³).
    #[arg(long, default_value_t = 1e19)]
    pub density: f64,
    /// Cell length (m).
    #[arg(long, default_value_t = 0.1)]
    pub cell_length: f64,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LineArgs {
    #[arg(long, default_value = "d1")]
    pub line: String,
    #[arg(long, default_value_t = 2.0)]
    pub ground_f: f64,
    /// Light power (W).
    #[arg(long, default_value_t = 10e-3)]
    pub power: f64,
    /// Beam diameter (m).
    #[arg(long, default_value_t = 3e-4)]
    pub beam_diameter: f64,
    /// Vapour temperature (K).
    #[arg(long, default_value_t = 309.0)]
    pub temperature: f64,
    /// Doppler width ku/2π (MHz); derived from the temperature if omitted.
    #[arg(long)]
    pub doppler_width_mhz: Option<f64>,
    /// Intensity (mW/cm²) above which ground hyperfine levels are not resolved.
    #[arg(long, default_value_t = 2e4)]
    pub max_intensity_mw_cm2: f64,
}

#[derive(Debug, Clone, Args)]
pub struct DmArgs {
    #[command(flatten)]
    pub line: LineArgs,
    /// Atomic density (m⁻³).
    #[arg(long, default_value_t = 1e18)]
    pub density: f64,
    /// Cell length (m).
    #[arg(long, default_value_t = 0.1)]
    pub cell_length: f64,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Args)]
pub struct KappaScanArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::X)]
    pub model: ModelArg,
    #[arg(long, default_value_t = 1e3)]
    pub kappa_from: f64,
    #[arg(long, default_value_t = 1e8)]
    pub kappa_to: f64,
    #[arg(long, default_value_t = 26)]
    pub kappa_points: usize,
    /// Ground relaxation γ/γ₀.
    #[arg(long, default_value_t = 1e-3)]
    pub gamma_ratio: f64,
    /// Configured line for the dm model.
    #[arg(long, default_value = "d1")]
    pub line: String,
    #[arg(long, default_value_t = 2.0)]
    pub ground_f: f64,
    /// Doppler width ku/2π (MHz) for the dm model.
    #[arg(long, default_value_t = 0.0)]
    pub doppler_width_mhz: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BufferArgs {
    /// Configured line supplying γ₀.
    #[arg(long, default_value = "d1")]
    pub line: String,
    /// Lowest buffer density as a multiple of the optimum.
    #[arg(long, default_value_t = 1e-2)]
    pub from: f64,
    /// Highest buffer density as a multiple of the optimum.
    #[arg(long, default_value_t = 1e2)]
    pub to: f64,
    #[arg(long, default_value_t = 41)]
    pub points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::X)]
    pub model: ModelArg,
    #[command(flatten)]
    pub drive: DriveArgs,
    /// D-line conditions for the dm model.
    #[arg(long, default_value_t = 2.0)]
    pub ground_f: f64,
    #[arg(long)]
    pub doppler_width_mhz: Option<f64>,
    /// Cell length (m).
    #[arg(long, default_value_t = 0.1)]
    pub cell_length: f64,
    /// Largest |Δ|/γ₀ scanned for the dm model.
    #[arg(long, default_value_t = 600.0)]
    pub span: f64,
    #[arg(long, default_value_t = 241)]
    pub points: usize,
}
