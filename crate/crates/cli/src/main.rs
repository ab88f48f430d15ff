//! `paradox-lens`: measure, predict and simulate the strong friendship
//! paradox from edge lists, writing plot-ready CSV and JSON.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use paradox_lens_core::{Model, ParadoxDefinition};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(paradox_lens_core::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl From<paradox_lens_core::Error> for CliError {
    fn from(e: paradox_lens_core::Error) -> Self {
        CliError::Data(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Data(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(e.into())
    }
}

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_WARNINGS: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "paradox-lens", version, about = "Strong friendship paradox analytics for large graphs")]
struct Cli {
    /// Exit with status 3 when numerical warnings were raised (outputs are still written).
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Degree, joint-degree, exceedance and observed-paradox tables for an edge list.
    Analyze(AnalyzeArgs),
    /// 2K and 3K model predictions from statistics measured on an edge list.
    Predict(PredictArgs),
    /// Write a synthetic edge list.
    Generate(GenerateArgs),
    /// Closed-form log-normal sweep over the correlation parameter c.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DefinitionArg {
    MedianStrict,
    XbarMajority,
}

impl From<DefinitionArg> for ParadoxDefinition {
    fn from(d: DefinitionArg) -> Self {
        match d {
            DefinitionArg::MedianStrict => ParadoxDefinition::MedianStrict,
            DefinitionArg::XbarMajority => ParadoxDefinition::XbarMajority,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    #[value(name = "2k")]
    TwoK,
    #[value(name = "2k-gauss")]
    TwoKGauss,
    #[value(name = "3k")]
    ThreeK,
    All,
}

impl ModelArg {
    fn models(self) -> Vec<Model> {
        match self {
            ModelArg::TwoK => vec![Model::Binomial2k],
            ModelArg::TwoKGauss => vec![Model::Gauss2k],
            ModelArg::ThreeK => vec![Model::ThreeK],
            ModelArg::All => Model::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Whitespace-separated edge list, one `u v` pair per line.
    input: PathBuf,

    /// Require every `u v` line to have a matching `v u` line instead of
    /// treating lines as undirected edges.
    #[arg(long)]
    no_symmetrize: bool,

    #[arg(long, value_enum, default_value = "median-strict")]
    definition: DefinitionArg,

    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    io: InputArgs,

    /// Log-spaced bins per decade for the smoothed exceedance table; 0 disables it.
    #[arg(long, default_value_t = 10)]
    bins: u32,

    /// Fewest nodes a smoothed bin may hold.
    #[arg(long, default_value_t = 10)]
    min_bin_nodes: u64,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    io: InputArgs,

    #[arg(long, value_enum, default_value = "all")]
    model: ModelArg,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("target").required(true).multiple(false)))]
pub struct GenerateArgs {
    /// Discretized bivariate log-normal joint degree distribution.
    #[arg(long, group = "target", num_args = 3, value_names = ["M", "S", "C"], allow_negative_numbers = true)]
    lognormal: Option<Vec<f64>>,

    /// CSV with columns `k,k2,e` (extra columns are ignored), e.g. the
    /// `joint_degree.csv` written by `analyze`.
    #[arg(long, group = "target", value_name = "FILE")]
    matrix: Option<PathBuf>,

    /// Core-periphery fixture tier sizes.
    #[arg(long, group = "target", value_name = "N_CORE,N_MID,N_LEAF", value_delimiter = ',', num_args = 1)]
    core_periphery: Option<Vec<usize>>,

    /// Node count for log-normal and matrix targets.
    #[arg(long)]
    nodes: Option<usize>,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Degree support of the log-normal grid.
    #[arg(long, default_value_t = 10_000)]
    k_max: usize,

    #[arg(long, default_value_t = 6)]
    mid_degree_min: usize,

    #[arg(long, default_value_t = 20)]
    mid_degree_max: usize,

    /// Probability that a mid node of the smallest mid degree faces the core.
    #[arg(long, default_value_t = 0.8)]
    beta_low: f64,

    /// Same, at the largest mid degree.
    #[arg(long, default_value_t = 0.2)]
    beta_high: f64,

    #[arg(long, default_value_t = 0.9)]
    purity: f64,

    #[arg(long)]
    out: PathBuf,

    /// Defaults to `<out>.manifest.json`.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 2.5, allow_negative_numbers = true)]
    m: f64,

    #[arg(long, default_value_t = 1.25)]
    s: f64,

    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "-0.75,-0.5,-0.25,0,0.25,0.5,0.75"
    )]
    c_list: Vec<f64>,

    #[arg(long, default_value_t = 10_000)]
    k_max: usize,

    /// Largest degree in the f-curve table; defaults to `--k-max`.
    #[arg(long)]
    curve_k_max: Option<usize>,

    /// Also generate one graph of this many nodes per c and measure it.
    #[arg(long, value_name = "NODES")]
    empirical: Option<usize>,

    /// Seed of the first empirical graph; the i-th c uses `seed + i`.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    #[arg(long)]
    out_dir: PathBuf,
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("PARADOX_LENS_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("PARADOX_LENS_THREADS={value:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Predict(a) => commands::predict(a),
        Command::Generate(a) => commands::generate(a),
        Command::Sweep(a) => commands::sweep(a),
    });
    match result {
        Ok(warnings) if cli.strict && !warnings.is_empty() => ExitCode::from(EXIT_WARNINGS),
        Ok(_) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DATA)
        }
    }
}
