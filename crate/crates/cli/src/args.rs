//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "rabi-otto",
    version,
    about = "Quantum Otto engine with a generalized Rabi working medium",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the lowest eigenvalues of one Rabi Hamiltonian.
    Spectrum(SpectrumArgs),
    /// Run a single Otto cycle and report Q1, Q2, W, eta and the regime.
    Cycle(CycleArgs),
    /// Sweep one parameter over a linear grid of cycles.
    Sweep(SweepArgs),
    /// Coherence and correlation measures of one thermal state.
    Measures(MeasuresArgs),
    /// Temperature-entropy representation of a positive-work cycle.
    TsDiagram(TsDiagramArgs),
    /// Check that detailed-balance rate equations thermalize to the Gibbs
    /// state regardless of the rate choice.
    VerifyThermalization(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Scaled,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVariable {
    G,
    #[value(name = "t-h")]
    TH,
    #[value(name = "t-l")]
    TL,
    #[value(name = "g-l")]
    GL,
    #[value(name = "g-h")]
    GH,
    #[value(name = "omega-h")]
    OmegaH,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CouplingArg {
    FieldQuadrature,
    QubitX,
    Both,
    All,
}

/// Options shared by every subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Line-oriented `key = value` configuration file; flags override it.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output file (defaults to stdout).
    #[arg(long, short = 'o', value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Highest retained Fock occupation.
    #[arg(long, default_value_t = 40)]
    pub n_max: usize,

    /// Pick the cutoff by doubling until converged instead of --n-max.
    #[arg(long)]
    pub adaptive: bool,

    /// Convergence tolerance for --adaptive.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,

    /// Annotate output with the physical scale for omega0/2pi = <GHZ> GHz.
    #[arg(long, value_name = "GHZ")]
    pub ghz: Option<f64>,
}

/// Cycle protocol parameters: either a frequency change (--omega-h,
/// --omega-l, --g) or a coupling change (--omega, --g-h, --g-l).
#[derive(Debug, Args)]
pub struct ProtocolArgs {
    /// Hot-stage field frequency (frequency protocol).
    #[arg(long)]
    pub omega_h: Option<f64>,

    /// Cold-stage field frequency (frequency protocol).
    #[arg(long)]
    pub omega_l: Option<f64>,

    /// Shared coupling (frequency protocol).
    #[arg(long)]
    pub g: Option<f64>,

    /// Fixed field frequency (coupling protocol).
    #[arg(long)]
    pub omega: Option<f64>,

    /// Hot-stage coupling (coupling protocol).
    #[arg(long)]
    pub g_h: Option<f64>,

    /// Cold-stage coupling (coupling protocol).
    #[arg(long)]
    pub g_l: Option<f64>,

    /// Hot bath temperature.
    #[arg(long, required = true)]
    pub t_h: Option<f64>,

    /// Cold bath temperature.
    #[arg(long, required = true)]
    pub t_l: Option<f64>,

    /// Symmetry-breaking bias as a fraction of the stage frequency.
    #[arg(long, default_value_t = 0.005)]
    pub epsilon_coeff: f64,

    /// Whether the qubit splitting tracks the stage frequency.
    #[arg(long, value_enum, default_value_t = ModeArg::Scaled)]
    pub delta_mode: ModeArg,

    /// Whether the bias tracks the stage frequency.
    #[arg(long, value_enum, default_value_t = ModeArg::Scaled)]
    pub epsilon_mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Field frequency.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,

    /// Coupling strength.
    #[arg(long, default_value_t = 0.0)]
    pub g: f64,

    /// Qubit half-splitting (defaults to omega/2).
    #[arg(long)]
    pub delta: Option<f64>,

    /// Bias (defaults to 0.005 * omega).
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// How many levels to print (defaults to the full spectrum).
    #[arg(long)]
    pub levels: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CycleArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(flatten)]
    pub protocol: ProtocolArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(flatten)]
    pub protocol: ProtocolArgs,

    /// Which parameter the grid varies.
    #[arg(long, value_enum)]
    pub variable: SweepVariable,

    #[arg(long)]
    pub start: f64,

    #[arg(long)]
    pub stop: f64,

    /// Number of grid points (inclusive endpoints).
    #[arg(long)]
    pub points: usize,

    /// Also compute hot- and cold-stage measure reports per point.
    #[arg(long)]
    pub measures: bool,

    /// Worker threads for the sweep (0 = one per core).  The output is
    /// byte-identical regardless.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct MeasuresArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Field frequency.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,

    /// Coupling strength.
    #[arg(long, default_value_t = 0.0)]
    pub g: f64,

    /// Temperature of the thermal state.
    #[arg(long, required = true)]
    pub t: Option<f64>,

    /// Qubit half-splitting (defaults to omega/2).
    #[arg(long)]
    pub delta: Option<f64>,

    /// Bias (defaults to 0.005 * omega).
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TsDiagramArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(flatten)]
    pub protocol: ProtocolArgs,

    /// Samples per isochore.
    #[arg(long, default_value_t = 64)]
    pub points_per_isochore: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Field frequency.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,

    /// Coupling strength.
    #[arg(long, default_value_t = 0.8)]
    pub g: f64,

    /// Bath temperature.
    #[arg(long, required = true)]
    pub t: Option<f64>,

    /// Comma-separated overall rate scales to try.
    #[arg(long, value_delimiter = ',', default_value = "0.37,1.0,7.3")]
    pub rate_scales: Vec<f64>,

    /// System-bath coupling operator(s).
    #[arg(long, value_enum, default_value_t = CouplingArg::All)]
    pub coupling: CouplingArg,

    /// Acceptance threshold on max |steady - Boltzmann|.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
}
