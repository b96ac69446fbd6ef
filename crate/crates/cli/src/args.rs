//! Argument definitions and the small value grammars behind them.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use varamp::problems::ProblemKind;
use varamp::spectrum::Direction;

#[derive(Debug, Parser)]
#[command(name = "varamp", version, about = "Amplitude-amplification workbench for combinatorial cost functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Generate a problem instance as JSON.
    Gen(GenArgs),
    /// Cost of one assignment.
    Eval(EvalArgs),
    /// Histogram and statistics of the full solution space.
    Spectrum(SpectrumArgs),
    /// One amplification run and its most probable outcomes.
    Amplify(AmplifyArgs),
    /// Probabilities of tracked costs over a p_s grid.
    Sweep(SweepArgs),
    /// Peak p_s of the best costs and the fitted correlation.
    Peaks(PeaksArgs),
    /// Sampled p_s estimate, or the sample-size error experiment.
    EstimatePs(EstimateArgs),
    /// Equal-budget measurement campaign over a p_s grid.
    Experiment(ExperimentArgs),
    /// Full hybrid solve with its trace.
    Hybrid(HybridArgs),
    /// Build, export and verify an oracle circuit.
    Circuit(CircuitArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Four-node chain whose assignment 1101 costs -24.
    Chain4,
}

/// Where the problem comes from: a file, a preset, or a generator.
#[derive(Clone, Debug, Args, Serialize)]
pub struct Source {
    /// Problem JSON file; overrides the generator flags.
    #[arg(long)]
    pub problem: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "problem")]
    pub preset: Option<Preset>,
    #[arg(long, default_value = "linear_qubo")]
    pub kind: ProblemKind,
    #[arg(long, default_value_t = 18)]
    pub n: usize,
    /// Edge count for graph kinds (default: half of all pairs).
    #[arg(long)]
    pub edges: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub colors: u32,
    #[arg(long, default_value_t = -100, allow_hyphen_values = true)]
    pub lo: i64,
    #[arg(long, default_value_t = 100, allow_hyphen_values = true)]
    pub hi: i64,
    /// Draw graph weights from [lo, hi] instead of using 1.
    #[arg(long)]
    pub weighted: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    pub source: Source,
    /// Digits such as `1101`, or comma separated for radix above 10.
    #[arg(long)]
    pub assignment: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub common: Common,
    /// Bin count, or `unit` for one bin per integer cost.
    #[arg(long, default_value = "auto")]
    pub bins: BinSpec,
    /// Scale used for sigma'.
    #[arg(long, default_value = "exact")]
    pub ps: PsSpec,
    /// Also save the raw cost table (plus a `.json` sidecar) here.
    #[arg(long)]
    pub save: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct AmplifyArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "exact")]
    pub ps: PsSpec,
    #[arg(long, default_value = "kG")]
    pub k: KSpec,
    /// Rows of the probability table.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub common: Common,
    /// `lo:hi:steps`; default is 200 points over [0.5, 1.5] of the exact p_s.
    #[arg(long)]
    pub grid: Option<GridSpec>,
    #[arg(long, default_value = "kG")]
    pub k: KSpec,
    /// Number of best costs tracked.
    #[arg(long, default_value_t = 5)]
    pub track: usize,
    #[arg(long, default_value = "min")]
    pub direction: Direction,
    /// Size of the cumulative top-R series.
    #[arg(long, default_value_t = 5)]
    pub top_r: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct PeaksArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 50)]
    pub r: usize,
    #[arg(long, default_value = "min")]
    pub direction: Direction,
    #[arg(long, default_value = "kG")]
    pub k: KSpec,
    /// `lo:hi:steps` for the coarse scan; default as in `sweep`.
    #[arg(long)]
    pub grid: Option<GridSpec>,
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub common: Common,
    /// Sample sizes; the first one is used outside `--table1`.
    #[arg(long, value_delimiter = ',', default_value = "1000")]
    pub m: Vec<usize>,
    /// Run the error-versus-sample-size experiment on fresh linear QUBOs.
    #[arg(long)]
    pub table1: bool,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 100)]
    pub qubos: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub grid: Option<GridSpec>,
    #[arg(long, default_value = "kG")]
    pub k: KSpec,
    /// Oracle calls per grid point.
    #[arg(long, default_value_t = 12000)]
    pub budget: usize,
    /// Classification threshold; default is the 1st percentile of sampled costs.
    #[arg(long, allow_hyphen_values = true)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct HybridArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Total oracle calls.
    #[arg(long, default_value_t = 2_000_000)]
    pub budget: u64,
    #[arg(long, default_value = "min")]
    pub direction: Direction,
}

#[derive(Debug, Args, Serialize)]
pub struct CircuitArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "exact")]
    pub ps: PsSpec,
    #[arg(long, value_enum, default_value = "qasm")]
    pub emit: Emit,
    /// Compare the circuit's diagonal with the engine's phase table.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Qasm,
    Json,
}

/// `exact`, `sampled:M` or a literal value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PsSpec {
    Exact,
    Sampled(usize),
    Value(f64),
}

impl FromStr for PsSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "exact" {
            return Ok(PsSpec::Exact);
        }
        if let Some(m) = s.strip_prefix("sampled:") {
            return m.parse().map(PsSpec::Sampled).map_err(|_| format!("bad sample count `{m}`"));
        }
        s.parse().map(PsSpec::Value).map_err(|_| format!("expected exact, sampled:M or a number, got `{s}`"))
    }
}

/// `kG` or an explicit iteration count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KSpec {
    Grover,
    Fixed(usize),
}

impl FromStr for KSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("kg") {
            return Ok(KSpec::Grover);
        }
        s.parse().map(KSpec::Fixed).map_err(|_| format!("expected kG or an integer, got `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || format!("expected lo:hi:steps, got `{s}`");
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(GridSpec {
            lo: parts[0].parse().map_err(|_| bad())?,
            hi: parts[1].parse().map_err(|_| bad())?,
            steps: parts[2].parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BinSpec {
    Auto,
    Unit,
    Count(usize),
}

impl FromStr for BinSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(BinSpec::Auto),
            "unit" => Ok(BinSpec::Unit),
            n => n.parse().map(BinSpec::Count).map_err(|_| format!("expected auto, unit or a count, got `{n}`")),
        }
    }
}
