use clap::{Args, Parser, Subcommand, ValueEnum};
use quermass::Ext;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "qk", version, about = "Functional quermassintegrals and inequality checks")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Tolerance override (must be positive).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Monte-Carlo samples (or subspaces for `kubota`).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Grid resolution: z-grid points, or the grid step for `supconv-support`.
    #[arg(long, global = true)]
    pub grid: Option<f64>,
    /// Comma-separated ρ values.
    #[arg(long, global = true, value_delimiter = ',')]
    pub rho: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quermassintegral vector of a convex body.
    Body(Inputs),
    /// W_i(f), Per(f), M(f) and χ(f).
    Quermass(Inputs),
    /// Steiner polynomial and the two-route check over the ρ list.
    Steiner(Inputs),
    /// Ψ(ρ) table and the dual mean width.
    DualSteiner(Inputs),
    /// Sup-convolution s·f ⊕ t·g; writes the result as JSON.
    Supconv {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        p: Params,
    },
    /// Projection onto a random (seeded) or coordinate k-subspace.
    Project {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        k: usize,
        /// Project onto span(e_1, …, e_k) instead of a random subspace.
        #[arg(long)]
        coordinate: bool,
    },
    /// Run an inequality check on the given inputs or on a seeded corpus.
    Check {
        suite: Suite,
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        p: Params,
        /// Corpus size when no input is given.
        #[arg(long, default_value_t = 500)]
        cases: usize,
        /// Output the sup-convolution (third input) to test instead of building it.
        #[arg(long)]
        h: Option<PathBuf>,
    },
    /// φ-sweep of F_p over cap bodies plus the violation search.
    Counterexample {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Projection-average recovery of W_i.
    Kubota {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

#[derive(Debug, Args)]
pub struct Inputs {
    #[arg(long = "input", short)]
    pub input: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Params {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<Ext>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<Ext>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Pl1d,
    GeneralizedPl,
    Hyperbolic,
    QuermassPl,
    BrascampLieb,
    GradientPl,
    Valuation,
    Kubota,
    Isoperimetric,
    Entropy,
    WkWi,
    WkNorm,
    Urysohn,
    Rearrangement,
    SupconvSupport,
}
