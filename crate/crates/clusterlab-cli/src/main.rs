//! clusterlab: grow Gaussian clusters, measure their spanning structures,
//! and run the reproduction experiments from the command line.
//!
//! Every run that writes files also writes a JSON manifest; `clusterlab
//! rerun --manifest <file>` replays it byte-identically. Seeds resolve with
//! precedence: --seed flag (or config-file seed) > CLUSTERLAB_SEED > 0.

mod commands;
mod manifest;

use std::env;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use clusterlab::{Error, Result};

use manifest::{ExperimentParams, GrowParams, MstParams};

const VALID_KINDS: &str = "scaling, tail, pairs, depth, urn, alpha-zero";

#[derive(Parser)]
#[command(
    name = "clusterlab",
    version,
    about = "Simulator and measurement lab for randomly growing Gaussian clusters"
)]
struct Cli {
    /// Cap the worker thread pool (default: one thread per core)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow a cluster; write a CSV, a config sidecar and a manifest
    Grow(GrowArgs),
    /// Euclidean minimum spanning tree of a cluster CSV
    Mst(MstArgs),
    /// Run a measurement experiment and print PASS/FAIL verdicts
    Experiment(ExperimentArgs),
    /// Replay a previous run from its manifest
    Rerun(RerunArgs),
}

#[derive(Args)]
struct GrowArgs {
    /// Ambient dimension (at least 1)
    #[arg(long)]
    dim: usize,
    /// Displacement decay exponent; step i has standard deviation i^-alpha
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    /// Total number of points, initial points included
    #[arg(long)]
    n: usize,
    /// RNG seed (precedence: flag > CLUSTERLAB_SEED > 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Cluster CSV path [default: cluster_<dim>_<alpha>_<seed>.csv]
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Start from these points instead of a single origin; one point per
    /// line, comma-separated coordinates
    #[arg(long, value_name = "FILE")]
    initial_points: Option<PathBuf>,
}

#[derive(Args)]
struct MstArgs {
    /// Cluster CSV produced by grow
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Use the exact O(n^2) engine instead of the dual-tree engine
    #[arg(long)]
    exact: bool,
    /// Edges CSV path [default: --in path with extension mst.csv]
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// One of: scaling, tail, pairs, depth, urn, alpha-zero
    #[arg(long, value_name = "KIND")]
    kind: Option<String>,
    /// Flat key=value file supplying any of the flags below (flags win)
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Ambient dimension [default: 2]
    #[arg(long)]
    dim: Option<usize>,
    /// Displacement decay exponent (scaling, tail, pairs)
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Cluster size (tail, urn)
    #[arg(long)]
    n: Option<usize>,
    /// Monte Carlo trials per grid cell
    #[arg(long)]
    trials: Option<usize>,
    /// Cluster-size grid, comma separated (scaling, pairs, alpha-zero)
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Radius thresholds, comma separated (tail) [default: 1..10]
    #[arg(long, value_delimiter = ',')]
    thresholds: Option<Vec<f64>>,
    /// Vertex indices to track, comma separated (depth, urn)
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    /// Close-pair radius prefactor in (0, 1] (pairs) [default: 0.1]
    #[arg(long)]
    epsilon: Option<f64>,
    /// RNG seed (precedence: flag > config file > CLUSTERLAB_SEED > 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for the report CSV and manifest [default: .]
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct RerunArgs {
    /// Manifest JSON written by a previous run
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,
}

fn main() -> ExitCode {
    // Rust ignores SIGPIPE, which turns `clusterlab ... | head` into a
    // "failed printing to stdout" panic. Restore the default disposition so
    // a closed pipe ends the process quietly, as shell tools are expected to.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(Error::InvalidArgument(
                "invalid value for --threads: must be at least 1".into(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("--threads: {e}")))?;
    }
    match cli.command {
        Command::Grow(args) => commands::run_grow(resolve_grow(args)?),
        Command::Mst(args) => commands::run_mst(resolve_mst(args)),
        Command::Experiment(args) => commands::run_experiment(resolve_experiment(args)?),
        Command::Rerun(args) => commands::run_rerun(&args.manifest),
    }
}

/// Flag > config-file value > CLUSTERLAB_SEED > 0.
fn resolve_seed(flag: Option<u64>, from_config: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag.or(from_config) {
        return Ok(seed);
    }
    match env::var("CLUSTERLAB_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!(
                "CLUSTERLAB_SEED must be an unsigned integer, got '{text}'"
            ))
        }),
        Err(env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(Error::InvalidArgument(format!("CLUSTERLAB_SEED: {e}"))),
    }
}

fn require_alpha(alpha: f64) -> Result<f64> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(alpha)
    } else {
        Err(Error::InvalidArgument(format!(
            "invalid value for --alpha: must be a finite number >= 0, got {alpha}"
        )))
    }
}

fn require_min(flag: &str, value: usize, min: usize) -> Result<usize> {
    if value >= min {
        Ok(value)
    } else {
        Err(Error::InvalidArgument(format!(
            "invalid value for {flag}: must be at least {min}, got {value}"
        )))
    }
}

fn resolve_grow(args: GrowArgs) -> Result<GrowParams> {
    let dim = require_min("--dim", args.dim, 1)?;
    let alpha = require_alpha(args.alpha)?;
    let n = require_min("--n", args.n, 1)?;
    let seed = resolve_seed(args.seed, None)?;
    let out = args
        .out
        .unwrap_or_else(|| PathBuf::from(format!("cluster_{dim}_{alpha}_{seed}.csv")));
    Ok(GrowParams { dim, alpha, n, seed, out, initial_points: args.initial_points })
}

fn resolve_mst(args: MstArgs) -> MstParams {
    let out = args.out.unwrap_or_else(|| args.input.with_extension("mst.csv"));
    MstParams { input: args.input, exact: args.exact, out }
}

/// Values read from a --config file; same names as the flags.
#[derive(Default)]
struct FileValues {
    kind: Option<String>,
    dim: Option<usize>,
    alpha: Option<f64>,
    n: Option<usize>,
    trials: Option<usize>,
    sizes: Option<Vec<usize>>,
    thresholds: Option<Vec<f64>>,
    m: Option<Vec<usize>>,
    epsilon: Option<f64>,
    seed: Option<u64>,
    out_dir: Option<PathBuf>,
}

fn parse_scalar<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid value for {key}: '{value}'"),
    })
}

fn parse_list<T: FromStr>(line: usize, key: &str, value: &str) -> Result<Vec<T>> {
    value.split(',').map(|field| parse_scalar(line, key, field.trim())).collect()
}

fn parse_config_file(path: &Path) -> Result<FileValues> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::InvalidArgument(format!("cannot read --config file '{}': {e}", path.display()))
    })?;
    let mut values = FileValues::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let no = idx + 1;
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse { line: no, message: "expected key=value".into() });
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "kind" => values.kind = Some(value.to_string()),
            "dim" => values.dim = Some(parse_scalar(no, key, value)?),
            "alpha" => values.alpha = Some(parse_scalar(no, key, value)?),
            "n" => values.n = Some(parse_scalar(no, key, value)?),
            "trials" => values.trials = Some(parse_scalar(no, key, value)?),
            "epsilon" => values.epsilon = Some(parse_scalar(no, key, value)?),
            "seed" => values.seed = Some(parse_scalar(no, key, value)?),
            "sizes" => values.sizes = Some(parse_list(no, key, value)?),
            "thresholds" => values.thresholds = Some(parse_list(no, key, value)?),
            "m" => values.m = Some(parse_list(no, key, value)?),
            "out-dir" => values.out_dir = Some(PathBuf::from(value)),
            _ => {
                return Err(Error::Parse {
                    line: no,
                    message: format!("unknown key '{key}'"),
                });
            }
        }
    }
    Ok(values)
}

fn resolve_experiment(args: ExperimentArgs) -> Result<ExperimentParams> {
    let file = match &args.config {
        Some(path) => parse_config_file(path)?,
        None => FileValues::default(),
    };
    let kind = args.kind.or(file.kind).ok_or_else(|| {
        Error::InvalidArgument(format!("missing --kind; valid kinds are {VALID_KINDS}"))
    })?;
    let seed = resolve_seed(args.seed, file.seed)?;
    let out_dir = args.out_dir.or(file.out_dir).unwrap_or_else(|| PathBuf::from("."));
    let dim = args.dim.or(file.dim).unwrap_or(2);
    let trials = args.trials.or(file.trials);
    let sizes = args.sizes.or(file.sizes);
    let alpha = match args.alpha.or(file.alpha) {
        Some(a) => Some(require_alpha(a)?),
        None => None,
    };
    let need_alpha = |kind: &str| {
        alpha.ok_or_else(|| Error::InvalidArgument(format!("--kind {kind} requires --alpha")))
    };
    let scaling_grid = || vec![1024, 2048, 4096, 8192, 16384, 32768, 65536];

    let params = match kind.as_str() {
        "scaling" => ExperimentParams::Scaling {
            dim,
            alpha: need_alpha("scaling")?,
            sizes: sizes.unwrap_or_else(scaling_grid),
            trials: trials.unwrap_or(20),
            seed,
            out_dir,
        },
        "tail" => ExperimentParams::Tail {
            dim,
            alpha: need_alpha("tail")?,
            n: args.n.or(file.n).unwrap_or(100_000),
            trials: trials.unwrap_or(1000),
            thresholds: args
                .thresholds
                .or(file.thresholds)
                .unwrap_or_else(|| (1..=10).map(|level| level as f64).collect()),
            seed,
            out_dir,
        },
        "pairs" => {
            let epsilon = args.epsilon.or(file.epsilon).unwrap_or(0.1);
            if !(epsilon.is_finite() && epsilon > 0.0 && epsilon <= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "invalid value for --epsilon: must be in (0, 1], got {epsilon}"
                )));
            }
            ExperimentParams::Pairs {
                dim,
                alpha: need_alpha("pairs")?,
                sizes: sizes.unwrap_or_else(|| vec![1024, 2048, 4096, 8192]),
                trials: trials.unwrap_or(100),
                epsilon,
                seed,
                out_dir,
            }
        }
        "depth" => ExperimentParams::Depth {
            m: args.m.or(file.m).unwrap_or_else(|| vec![100, 1000]),
            trials: trials.unwrap_or(1000),
            seed,
            out_dir,
        },
        "urn" => ExperimentParams::Urn {
            m: args.m.or(file.m).unwrap_or_else(|| vec![2, 5, 10, 50]),
            n: args.n.or(file.n).unwrap_or(10_000),
            trials: trials.unwrap_or(1000),
            seed,
            out_dir,
        },
        "alpha-zero" => ExperimentParams::AlphaZero {
            dim,
            sizes: sizes.unwrap_or_else(scaling_grid),
            trials: trials.unwrap_or(30),
            seed,
            out_dir,
        },
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown experiment kind '{other}'; valid kinds are {VALID_KINDS}"
            )));
        }
    };
    Ok(params)
}
