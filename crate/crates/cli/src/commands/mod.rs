//! Subcommand definitions and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use onn_core::{Error, Result};

mod energy_table;
mod eval;
mod info;
mod repro;
mod sweep_disorder;
mod sweep_photons;
mod train;

pub use repro::Scale;

#[derive(Parser)]
#[command(
    name = "onn",
    version,
    about = "All-optical neural network simulator and cost-model toolkit",
    after_help = "Exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure."
)]
pub struct Cli {
    /// Worker threads for Monte-Carlo sweep trials (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Train a classifier on MNIST and save the model.
    ///
    /// Writes <out-dir>/<tag>/model.onnm, a per-epoch training.csv with
    /// columns (epoch, train_loss, train_acc, test_acc), and manifest.txt.
    Train(TrainArgs),

    /// Evaluate a saved model, optionally under disorder or shot noise.
    Eval(EvalArgs),

    /// Monte-Carlo sweep of static disorder strength.
    ///
    /// Writes a CSV with columns (sigma, mean_error, std_error, trials,
    /// clamp_events); one row per sigma, `trials` static realizations per
    /// row.
    SweepDisorder(SweepDisorderArgs),

    /// Monte-Carlo sweep of shot noise versus photons per operation.
    ///
    /// Writes a CSV with columns (beta, photons_per_op, photons_per_mac,
    /// mean_error, std_error, trials). Rows can be addressed either by
    /// beta or by target photons-per-op values.
    SweepPhotons(SweepPhotonsArgs),

    /// Print per-operation energy estimates and write them as CSV.
    ///
    /// CSV columns: (scenario, technology, energy_per_op_j,
    /// energy_per_inference_j, ops_per_inference, neuron_compute_j,
    /// input_memory_j, acquisition_j).
    EnergyTable(EnergyTableArgs),

    /// Run the full experiment pipeline (training curves, disorder and
    /// photon sweeps, energy tables) at a reduced or full scale.
    ReproPaper(ReproArgs),

    /// Describe a saved model or a dataset directory.
    Info(InfoArgs),
}

#[derive(Args)]
pub struct TrainArgs {
    /// Numeric field: real | complex.
    #[arg(long, default_value = "complex")]
    pub field: String,
    /// Activation: relu | sigmoid (real); modulus | csigmoid (complex).
    #[arg(long, default_value = "csigmoid")]
    pub activation: String,
    /// Hidden layer widths, comma separated (e.g. 100 or 100,100).
    #[arg(long, default_value = "100")]
    pub hidden: String,
    #[arg(long, default_value_t = 150)]
    pub epochs: u32,
    #[arg(long, default_value_t = 64)]
    pub batch: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    /// Optimizer: adam | sgd.
    #[arg(long, default_value = "adam")]
    pub optimizer: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// MNIST directory (fallback: ONN_DATA_DIR, then data/mnist).
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    /// Run tag; directory name under --out-dir (default: derived from
    /// the configuration).
    #[arg(long)]
    pub tag: Option<String>,
}

#[derive(Args)]
pub struct EvalArgs {
    /// Saved model file.
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    /// Evaluate on this split: test | train.
    #[arg(long, default_value = "test")]
    pub split: String,
    /// Static disorder strength (enables disorder noise).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Coherent-state amplitude scale (enables shot noise).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Monte-Carlo trials when noise is enabled.
    #[arg(long, default_value_t = 10)]
    pub trials: u32,
    #[arg(long, default_value_t = 0)]
    pub noise_seed: u64,
}

#[derive(Args)]
pub struct SweepDisorderArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Comma-separated disorder strengths, e.g. 0,0.2,0.4,0.8.
    #[arg(long)]
    pub sigmas: String,
    #[arg(long, default_value_t = 10)]
    pub trials: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    /// Output CSV path.
    #[arg(long, default_value = "out/disorder_sweep.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct SweepPhotonsArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Comma-separated beta values.
    #[arg(long, conflicts_with = "photons")]
    pub betas: Option<String>,
    /// Comma-separated target photons-per-op values; beta is derived by
    /// inverting the quadratic scaling.
    #[arg(long)]
    pub photons: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub trials: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Optical wavelength in nanometres (for the energy column).
    #[arg(long, default_value_t = 1550.0)]
    pub wavelength_nm: f64,
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    #[arg(long, default_value = "out/photon_sweep.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct EnergyTableArgs {
    /// Built-in preset: table1 | sec2d.
    #[arg(long, conflicts_with = "scenario")]
    pub preset: Option<String>,
    /// Scenario file (flat key = value text).
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct ReproArgs {
    /// ci (minutes, reduced trials/epochs) | full (paper-scale, hours).
    #[arg(long, default_value = "ci")]
    pub scale: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    #[arg(long, default_value = "out/repro")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct InfoArgs {
    /// Saved model file to describe.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Dataset directory to describe.
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train(args) => train::run(args),
        Command::Eval(args) => eval::run(args),
        Command::SweepDisorder(args) => sweep_disorder::run(args),
        Command::SweepPhotons(args) => sweep_photons::run(args),
        Command::EnergyTable(args) => energy_table::run(args),
        Command::ReproPaper(args) => repro::run(args),
        Command::Info(args) => info::run(args),
    }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

/// MNIST directory: flag, then ONN_DATA_DIR, then ./data/mnist.
pub fn resolve_data_dir(flag: &Option<PathBuf>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.clone();
    }
    if let Ok(env_dir) = std::env::var("ONN_DATA_DIR") {
        if !env_dir.is_empty() {
            return PathBuf::from(env_dir);
        }
    }
    PathBuf::from("data/mnist")
}

/// Parses a comma-separated list of finite numbers.
pub fn parse_f64_list(text: &str, what: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let v: f64 = part
            .parse()
            .map_err(|_| Error::Config(format!("bad {what} value {part:?}")))?;
        if !v.is_finite() {
            return Err(Error::Config(format!("{what} value {part:?} is not finite")));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Config(format!("{what} list is empty")));
    }
    Ok(out)
}

/// Derives an independent seed for sweep point `index` from the base
/// seed, so that neighbouring base seeds or points never share streams.
pub fn point_seed(base: u64, index: u64) -> u64 {
    // splitmix64 finalizer.
    let mut z = base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Parses hidden widths like "100" or "100,100". Zero is rejected.
pub fn parse_hidden_list(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let v: usize = part
            .parse()
            .map_err(|_| Error::Config(format!("bad hidden width {part:?}")))?;
        if v == 0 {
            return Err(Error::Config(
                "hidden width 0 is not allowed; at least one hidden layer with >= 1 neurons \
                 is required"
                    .into(),
            ));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Config("hidden layer list is empty".into()));
    }
    Ok(out)
}
