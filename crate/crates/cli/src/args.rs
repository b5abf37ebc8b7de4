use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "coulomb-momentum", version, about = "Spectra, radial functions and verification reports for the N-dimensional Coulomb problem in momentum space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound-state energies, momentum scales and degeneracies
    Energies(EnergiesArgs),
    /// Tabulate a radial function on a uniform momentum grid
    Radial(RadialArgs),
    /// Run a verification check and report pass/fail
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Bound,
    Sturmian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Check {
    Residual,
    Gram,
    Ossicini,
    Cohl,
    Closure,
    Fourier,
    Nystrom,
    Degeneracy,
    Specfun,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Residual => "residual",
            Check::Gram => "gram",
            Check::Ossicini => "ossicini",
            Check::Cohl => "cohl",
            Check::Closure => "closure",
            Check::Fourier => "fourier",
            Check::Nystrom => "nystrom",
            Check::Degeneracy => "degeneracy",
            Check::Specfun => "specfun",
        }
    }
}

#[derive(Debug, Args)]
pub struct EnergiesArgs {
    #[arg(long)]
    pub dim: u32,
    #[arg(long)]
    pub z: f64,
    #[arg(long = "n-max")]
    pub n_max: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RadialArgs {
    #[arg(long)]
    pub dim: u32,
    #[arg(long, default_value_t = 1.0)]
    pub z: f64,
    /// Principal quantum number (bound states)
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    #[arg(long = "p-min", default_value_t = 0.0)]
    pub p_min: f64,
    #[arg(long = "p-max", default_value_t = 10.0)]
    pub p_max: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Kind::Bound)]
    pub kind: Kind,
    /// Momentum scale q (Sturmians)
    #[arg(long)]
    pub q: Option<f64>,
    /// Radial quantum number (Sturmians)
    #[arg(long)]
    pub nr: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Scope flags narrow the default sweep of each check; unset flags keep the
/// full default range.
#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub check: Check,
    #[arg(long)]
    pub dim: Option<u32>,
    #[arg(long = "dim-max")]
    pub dim_max: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long = "n-max")]
    pub n_max: Option<u32>,
    #[arg(long)]
    pub l: Option<u32>,
    #[arg(long)]
    pub nr: Option<u32>,
    #[arg(long = "nr-max")]
    pub nr_max: Option<u32>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub z: f64,
    /// Series truncation index
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long = "grid-size")]
    pub grid_size: Option<usize>,
    /// Override the default tolerance of the check
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}
