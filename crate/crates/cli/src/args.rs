use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "nabla-fc", version, about = "Nabla fractional differences, inequality checks and Caputo system simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Grünwald–Letnikov weight sequence.
    Weights(WeightsArgs),
    /// Apply a fractional difference to a CSV signal.
    Diff(DiffArgs),
    /// Run the randomized inequality suite.
    Verify(VerifyArgs),
    /// Simulate a built-in or linear Caputo system.
    Simulate(SimulateArgs),
    /// Fractional-order gradient descent on the valley objective.
    Optimize(OptimizeArgs),
    /// Reproduce one of the three reference runs.
    Example(ExampleArgs),
    /// Repeat the run recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightKindArg {
    /// Difference weights of order α.
    Diff,
    /// Sum weights of order α - 1.
    Sum,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct WeightsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long)]
    pub count: usize,
    #[arg(long, value_enum, default_value = "diff")]
    pub kind: WeightKindArg,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefinitionArg {
    Gl,
    Rl,
    Caputo,
    /// GL with the base sample left out.
    GlMod,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct DiffArgs {
    /// CSV with columns `k,x` or `k,x1,…,xd` and contiguous `k`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long = "def", value_enum, default_value = "caputo")]
    pub definition: DefinitionArg,
    /// Fixed memory length; full history when omitted.
    #[arg(long)]
    pub memory: Option<usize>,
    /// Base point `a`; defaults to one past the first index.
    #[arg(long, allow_hyphen_values = true)]
    pub base: Option<i64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    Standard,
    FixedMemory,
    VariableOrder,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 50)]
    pub max_len: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 0.95)]
    pub alpha_max: f64,
    /// Overridden by `NABLA_FC_SEED` when set.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9, allow_hyphen_values = true)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value = "standard")]
    pub family: FamilyArg,
    /// Memory length for the fixed-memory family; full history when omitted.
    #[arg(long)]
    pub memory: Option<usize>,
    /// JSON report; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum SystemArg {
    /// (-x1 + x2^3, -x1 - x2)
    #[value(name = "example1")]
    #[serde(rename = "example1")]
    Example1,
    /// (-x1 + x2^(1/3), -x1^(1/5) - x2)
    #[value(name = "example2")]
    #[serde(rename = "example2")]
    Example2,
    /// A x with --matrix
    #[value(name = "linear")]
    #[serde(rename = "linear")]
    Linear,
}

impl SystemArg {
    pub fn name(self) -> &'static str {
        match self {
            SystemArg::Example1 => "example1",
            SystemArg::Example2 => "example2",
            SystemArg::Linear => "linear",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1e-12)]
    pub solver_tolerance: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1.0)]
    pub damping: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub system: SystemArg,
    /// Row-major square matrix for the linear system.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub matrix: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.8)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub base: i64,
    /// Initial state `x(a-1)`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x0: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Trajectory CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG plot of each component against k.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct OptimizeArgs {
    #[arg(long, default_value_t = 0.8)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub rho: f64,
    /// Starting point `x(-1)`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "2,-1")]
    pub x0: Vec<f64>,
    #[arg(long, default_value_t = 500)]
    pub steps: usize,
    /// Trajectory CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Objective values `k,f_value`; next to --out when omitted.
    #[arg(long)]
    pub objective_out: Option<PathBuf>,
    /// SVG with the search path and the objective curve.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ExampleArgs {
    /// 1: cubic coupling, 2: root coupling, 3: gradient descent.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
    pub number: u8,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Horizon; 200 for examples 1 and 2, 500 for example 3.
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}
