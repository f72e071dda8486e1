//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use levy_core::{CheapVariant, ExpansionKind, Method};

#[derive(Debug, Parser)]
#[command(name = "levy", version, about = "Brownian bridge expansions and Lévy-area approximations")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Defaults that depend on the
/// subcommand are resolved there.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed of the random streams
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Monte Carlo sample count
    #[arg(long, global = true)]
    pub samples: Option<u64>,

    /// Number of Brownian coordinates
    #[arg(long, global = true)]
    pub dims: Option<usize>,

    /// Comma-separated, strictly increasing truncation levels
    #[arg(long, global = true, value_parser = parse_n_list)]
    pub n_list: Option<NList>,

    /// Point count of a uniform grid on [0, 1], or explicit comma-separated points
    #[arg(long, global = true, value_parser = parse_grid)]
    pub grid: Option<Grid>,

    /// Lévy-area methods
    #[arg(long, global = true, value_delimiter = ',')]
    pub method: Vec<MethodArg>,

    /// Distribution of the correction matrix of the one-term approximation
    #[arg(long, global = true, value_delimiter = ',')]
    pub variant: Vec<VariantArg>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file; standard output if absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads; the hardware parallelism if absent
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,

    /// Index of the first random stream
    #[arg(long, global = true, default_value_t = 0)]
    pub stream_offset: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ζ(2n) and B_{2n} for n = 1..=max-n
    Zeta {
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        max_n: u32,
    },
    /// Exact mean-squared errors of the truncated approximations
    MseTable,
    /// Monte Carlo MSE study with log-log rate fits
    Convergence {
        /// Reference truncation; max(64, 16·index) per cell if absent
        #[arg(long)]
        n_ref: Option<usize>,
    },
    /// Scaled fluctuation covariances: analytic, empirical and limit
    Fluctuation {
        #[arg(long, value_delimiter = ',')]
        kind: Vec<KindArg>,
        /// Reference order of the empirical sampler; 4N if absent
        #[arg(long)]
        n_ref: Option<usize>,
    },
    /// Truncated bridge paths on a grid
    SamplePath {
        #[arg(long, value_enum, default_value_t = KindArg::Fourier)]
        kind: KindArg,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
        order: u64,
    },
    /// Second moments of the one-term approximation, stitched over n-list subintervals
    CheapArea,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Zeta { .. } => "zeta",
            Command::MseTable => "mse-table",
            Command::Convergence { .. } => "convergence",
            Command::Fluctuation { .. } => "fluctuation",
            Command::SamplePath { .. } => "sample-path",
            Command::CheapArea => "cheap-area",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Fourier,
    Kpw,
    Polynomial,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Fourier => Method::Fourier,
            MethodArg::Kpw => Method::Kpw,
            MethodArg::Polynomial => Method::Polynomial,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    DavieFlint,
    Foster,
}

impl From<VariantArg> for CheapVariant {
    fn from(v: VariantArg) -> CheapVariant {
        match v {
            VariantArg::DavieFlint => CheapVariant::DavieFlint,
            VariantArg::Foster => CheapVariant::Foster,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Kl,
    Fourier,
    Polynomial,
}

impl From<KindArg> for ExpansionKind {
    fn from(k: KindArg) -> ExpansionKind {
        match k {
            KindArg::Kl => ExpansionKind::KarhunenLoeve,
            KindArg::Fourier => ExpansionKind::Fourier,
            KindArg::Polynomial => ExpansionKind::Polynomial,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NList(pub Vec<u64>);

impl std::fmt::Display for NList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

fn parse_n_list(s: &str) -> Result<NList, String> {
    let values = s
        .split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err("levels must be strictly increasing".into());
    }
    Ok(NList(values))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Uniform(usize),
    Points(Vec<f64>),
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::Uniform(n) => levy_core::bridge::uniform_grid(*n).expect("validated when parsed"),
            Grid::Points(p) => p.clone(),
        }
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Grid::Uniform(n) => write!(f, "{n}"),
            Grid::Points(p) => {
                let parts: Vec<String> = p.iter().map(|x| format!("{x:?}")).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    if !s.contains(',') && !s.contains('.') {
        let n: usize = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
        if n < 2 {
            return Err("a uniform grid needs at least two points".into());
        }
        return Ok(Grid::Uniform(n));
    }
    let points = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if points.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err("grid points must lie in [0, 1]".into());
    }
    if points.windows(2).any(|w| w[0] >= w[1]) {
        return Err("grid points must be strictly increasing".into());
    }
    Ok(Grid::Points(points))
}
