use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Parser, Debug)]
#[command(
    name = "orlicz",
    version,
    about = "Certified evaluation, analysis and verification of an explicit Orlicz function",
    after_help = "Exit codes: 0 success/verified, 1 falsified, 2 undetermined, 3 usage, 4 I/O."
)]
pub struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true)]
    pub bits: Option<u32>,
    /// Block budget of the construction (largest block index).
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<u32>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Significant digits of printed bounds.
    #[arg(long, global = true)]
    pub digits: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate phi, f, F, Phi or the dilation Phi_n at points.
    Eval(EvalArgs),
    /// Run the verification suite (or one check).
    Verify(VerifyArgs),
    /// Generic Orlicz analysis on a named model.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    #[value(name = "phi")]
    Density,
    #[value(name = "f")]
    LogF,
    #[value(name = "F")]
    F,
    #[value(name = "Phi")]
    Phi,
    #[value(name = "Phi_n")]
    PhiN,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub target: Target,
    /// Points: decimals, fractions `a/b`, or powers `2^k`, `2^(a/b)`.
    pub points: Vec<String>,
    /// Read additional points from a file, one per line.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Block index of the dilation `Phi_n(x) = Phi(x t_n)/Phi(t_n)`.
    #[arg(long)]
    pub n: Option<u32>,
    /// Point for `Phi_n`.
    #[arg(long)]
    pub x: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Standard,
    HalfSlope,
    HalfExponent,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Run only this check.
    #[arg(long)]
    pub check: Option<String>,
    /// Single `m` for exact_ratio / phi_ratio_bound.
    #[arg(long)]
    pub m: Option<u32>,
    /// Single `n` for exact_ratio / phi_ratio_bound.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Grids cover `[1, 2^(2^R)]`.
    #[arg(long = "range")]
    pub range_exponent_max: Option<u32>,
    #[arg(long = "grid-points")]
    pub grid_points: Option<usize>,
    #[arg(long = "sandwich-points")]
    pub sandwich_points: Option<usize>,
    #[arg(long = "measure-samples")]
    pub measure_samples: Option<usize>,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Record wall-clock times (the report is then not reproducible).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(subcommand)]
    pub op: AnalyzeOp,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArg {
    /// `power:p`, `powernorm:p` (s^p/p), `xlog`, `F`, `Phi`, or
    /// `table:<file>` with columns `log2_x,log2_m`.
    #[arg(long)]
    pub model: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum AnalyzeOp {
    /// Matuszewska–Orlicz index estimates from running suprema.
    Indices {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long = "p-grid", value_delimiter = ',')]
        p_grid: Option<Vec<String>>,
        /// Range exponents `e` (samples `x, y ∈ [1, 2^e]`).
        #[arg(long, value_delimiter = ',')]
        ranges: Option<Vec<String>>,
        #[arg(long)]
        density: Option<usize>,
    },
    /// Young conjugate values.
    Conjugate {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, value_delimiter = ',')]
        t: Option<Vec<String>>,
    },
    /// Heuristic ∇₃ probe `M̃(Ct)/M̃(t)`.
    Nabla3 {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        c: Option<String>,
        #[arg(long, value_delimiter = ',')]
        t: Option<Vec<String>>,
    },
    /// Dilation matrices `M(x t)/M(t)` at `t = 2^(2^n)`.
    Einf {
        #[command(flatten)]
        model: ModelArg,
        /// `a..b` or a comma list.
        #[arg(long)]
        n: Option<String>,
        /// Free scales `log2 t` instead of `--n`.
        #[arg(long, value_delimiter = ',')]
        scales: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<String>>,
        #[arg(long = "m-list", value_delimiter = ',')]
        m_list: Option<Vec<u32>>,
    },
    /// Luxemburg norm of a step function on [0, 1].
    Norm {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',')]
        measures: Option<Vec<String>>,
    },
}
