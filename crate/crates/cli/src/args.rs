use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "optrf", version, about = "Simulated optical random features: features, kernels, ridge, grid search, convergence")]
pub struct Cli {
    /// Worker threads (default: available cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// More logging (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a feature matrix and write it as a container.
    Features(ManifestArgs),
    /// Evaluate an exact kernel Gram matrix on the data.
    Kernel(ManifestArgs),
    /// Train ridge and report train/validation/test accuracy.
    Train(ManifestArgs),
    /// Grid search hyperparameters on a validation split.
    Grid(ManifestArgs),
    /// Measure Monte Carlo error of optical features against their limit kernels.
    Converge(ManifestArgs),
    /// Threshold features to {0, 1}.
    Binarize(ManifestArgs),
    /// Turn a grid or convergence JSON result into plot-ready CSV.
    Plotdata(PlotArgs),
    /// Download and cache the Fashion MNIST archives.
    Fetch(FetchArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Features(_) => "features",
            Command::Kernel(_) => "kernel",
            Command::Train(_) => "train",
            Command::Grid(_) => "grid",
            Command::Converge(_) => "converge",
            Command::Binarize(_) => "binarize",
            Command::Plotdata(_) => "plotdata",
            Command::Fetch(_) => "fetch",
        }
    }
}

/// A manifest plus flags mirroring its most common fields. When both set a
/// field, the manifest wins and a warning is logged.
#[derive(Debug, Clone, Default, Args)]
pub struct ManifestArgs {
    /// Experiment manifest (JSON).
    #[arg(short, long)]
    pub manifest: Option<PathBuf>,
    /// output_dir
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// features.seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// features.map.family (optical, rbf_fourier, linear)
    #[arg(long)]
    pub family: Option<String>,
    /// features.map.exponent
    #[arg(long)]
    pub exponent: Option<f64>,
    /// features.map.gamma
    #[arg(long)]
    pub gamma: Option<f64>,
    /// features.map.dim
    #[arg(long)]
    pub dim: Option<usize>,
    /// features.map.scale
    #[arg(long)]
    pub scale: Option<f64>,
    /// features.map.bias
    #[arg(long)]
    pub bias: Option<f64>,
    /// features.strict_binary
    #[arg(long)]
    pub strict_binary: bool,
    /// ridge.alpha
    #[arg(long)]
    pub alpha: Option<f64>,
    /// ridge.mode (primal, dual)
    #[arg(long)]
    pub mode: Option<String>,
    /// binarize.threshold
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Any field: `dotted.path=<json>` (a bare word is taken as a string).
    #[arg(long = "set", value_name = "PATH=VALUE")]
    pub set: Vec<String>,
}

impl ManifestArgs {
    /// `(dotted path, value)` pairs for every flag given.
    pub fn overrides(&self) -> Result<Vec<(String, Value)>, String> {
        let mut out: Vec<(String, Value)> = Vec::new();
        let mut push = |path: &str, v: Value| out.push((path.to_string(), v));
        if let Some(p) = &self.output_dir {
            push("output_dir", json!(p));
        }
        if let Some(v) = self.seed {
            push("features.seed", json!(v));
        }
        if let Some(v) = &self.family {
            push("features.map.family", json!(v));
        }
        if let Some(v) = self.exponent {
            push("features.map.exponent", json!(v));
        }
        if let Some(v) = self.gamma {
            push("features.map.gamma", json!(v));
        }
        if let Some(v) = self.dim {
            push("features.map.dim", json!(v));
        }
        if let Some(v) = self.scale {
            push("features.map.scale", json!(v));
        }
        if let Some(v) = self.bias {
            push("features.map.bias", json!(v));
        }
        if self.strict_binary {
            push("features.strict_binary", json!(true));
        }
        if let Some(v) = self.alpha {
            push("ridge.alpha", json!(v));
        }
        if let Some(v) = &self.mode {
            push("ridge.mode", json!(v));
        }
        if let Some(v) = self.threshold {
            push("binarize.threshold", json!(v));
        }
        for item in &self.set {
            let (path, raw) = item
                .split_once('=')
                .ok_or_else(|| format!("--set expects PATH=VALUE, got {item:?}"))?;
            let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
            out.push((path.trim().to_string(), value));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    /// A `grid_result.json` or `convergence.json` file.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Destination CSV.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct FetchArgs {
    #[arg(long, default_value_t = 10_000)]
    pub n_train: usize,
    #[arg(long, default_value_t = 2_000)]
    pub n_test: usize,
    /// Mirror to download from instead of the default host.
    #[arg(long)]
    pub base_url: Option<String>,
}
