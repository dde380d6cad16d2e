//! Command bodies. Each runner takes fully resolved parameters (the same
//! types stored in manifests), writes its outputs plus a manifest, and
//! returns whether every requested check passed, so `rerun` goes through
//! the exact code path of the original invocation.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clusterlab::experiments::{
    alpha_zero_experiment, all_passed, close_pair_experiment, depth_tail_experiment,
    scaling_experiment, tail_experiment, urn_validation, Check,
};
use clusterlab::geometry::{emst_exact, emst_fast};
use clusterlab::io::{
    format_sig6, read_cluster_csv, write_cluster_csv, write_config_json, write_edges_csv,
    write_span_summary_json, SpanSummary,
};
use clusterlab::process::{grow, GrowthConfig};
use clusterlab::{Error, Result};

use crate::manifest::{
    write_manifest, ExperimentParams, GrowParams, MstParams, RunManifest,
};

/// Replaces or appends the final extension: `a/b.csv` -> `a/b.<ext>`.
fn sibling(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

fn create(path: &Path) -> Result<fs::File> {
    fs::File::create(path).map_err(|e| {
        Error::InvalidArgument(format!("cannot write '{}': {e}", path.display()))
    })
}

/// Each line of an initial-points file is one point: comma-separated
/// coordinates, `dim` of them. Blank lines and `#` comments are skipped.
fn read_initial_points(path: &Path, dim: usize) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(|e| {
        Error::InvalidArgument(format!(
            "cannot read --initial-points file '{}': {e}",
            path.display()
        ))
    })?;
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut coords = Vec::with_capacity(dim);
        for field in line.split(',') {
            let field = field.trim();
            coords.push(field.parse::<f64>().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("invalid coordinate '{field}' in --initial-points file"),
            })?);
        }
        if coords.len() != dim {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!(
                    "initial point has {} coordinates, --dim is {dim}",
                    coords.len()
                ),
            });
        }
        points.push(coords);
    }
    if points.is_empty() {
        return Err(Error::InvalidArgument(
            "--initial-points file contains no points".into(),
        ));
    }
    Ok(points)
}

pub fn run_grow(params: GrowParams) -> Result<bool> {
    let mut config = GrowthConfig::new(params.dim, params.alpha, params.n, params.seed);
    if let Some(file) = &params.initial_points {
        config = config.with_initial_points(read_initial_points(file, params.dim)?);
    }
    let cluster = grow(&config)?;

    let csv_path = &params.out;
    let config_path = sibling(csv_path, "config.json");
    write_cluster_csv(&mut create(csv_path)?, &cluster)?;
    write_config_json(&mut create(&config_path)?, cluster.config())?;

    let manifest = RunManifest::new(
        "grow",
        serde_json::to_value(&params)?,
        params.seed,
        vec![csv_path.clone(), config_path.clone()],
    );
    let manifest_path = sibling(csv_path, "manifest.json");
    write_manifest(&manifest_path, &manifest)?;

    println!(
        "grew {} points (dim {}, alpha {}), radius {}",
        cluster.len(),
        cluster.dim(),
        params.alpha,
        format_sig6(cluster.radius())
    );
    println!("cluster:  {}", csv_path.display());
    println!("config:   {}", config_path.display());
    println!("manifest: {}", manifest_path.display());
    Ok(true)
}

pub fn run_mst(params: MstParams) -> Result<bool> {
    let file = fs::File::open(&params.input).map_err(|e| {
        Error::InvalidArgument(format!(
            "cannot read --in file '{}': {e}",
            params.input.display()
        ))
    })?;
    let (points, _parents) = read_cluster_csv(BufReader::new(file))?;
    let structure = if params.exact { emst_exact(&points)? } else { emst_fast(&points)? };

    let edges_path = &params.out;
    let summary_path = sibling(edges_path, "summary.json");
    write_edges_csv(&mut create(edges_path)?, &structure)?;
    let summary = SpanSummary::new(&structure, points.len());
    write_span_summary_json(&mut create(&summary_path)?, &summary)?;

    let manifest = RunManifest::new(
        "mst",
        serde_json::to_value(&params)?,
        0,
        vec![edges_path.clone(), summary_path.clone()],
    );
    let manifest_path = sibling(edges_path, "manifest.json");
    write_manifest(&manifest_path, &manifest)?;

    let engine = if params.exact { "exact" } else { "dual-tree" };
    println!(
        "emst ({engine} engine): {} points, {} edges, total length {}",
        points.len(),
        structure.edges.len(),
        format_sig6(structure.total_length)
    );
    println!("edges:    {}", edges_path.display());
    println!("summary:  {}", summary_path.display());
    println!("manifest: {}", manifest_path.display());
    Ok(true)
}

pub fn run_experiment(params: ExperimentParams) -> Result<bool> {
    let (csv, checks): (Vec<u8>, Vec<Check>) = match &params {
        ExperimentParams::Scaling { dim, alpha, sizes, trials, seed, .. } => {
            let report = scaling_experiment(*dim, *alpha, sizes, *trials, *seed)?;
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            (buf, report.checks())
        }
        ExperimentParams::Tail { dim, alpha, n, trials, thresholds, seed, .. } => {
            let report = tail_experiment(*dim, *alpha, *n, *trials, thresholds, *seed)?;
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            (buf, report.checks())
        }
        ExperimentParams::Pairs { dim, alpha, sizes, trials, epsilon, seed, .. } => {
            let report = close_pair_experiment(*dim, *alpha, sizes, *trials, *epsilon, *seed)?;
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            (buf, report.checks())
        }
        ExperimentParams::Depth { m, trials, seed, .. } => {
            let report = depth_tail_experiment(m, *trials, *seed)?;
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            (buf, report.checks())
        }
        ExperimentParams::Urn { m, n, trials, seed, .. } => {
            let report = urn_validation(m, *n, *trials, *seed)?;
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            (buf, report.checks())
        }
        ExperimentParams::AlphaZero { dim, sizes, trials, seed, .. } => {
            let report = alpha_zero_experiment(*dim, sizes, *trials, *seed)?;
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            (buf, report.checks())
        }
    };

    let out_dir = params.out_dir();
    fs::create_dir_all(out_dir).map_err(|e| {
        Error::InvalidArgument(format!(
            "cannot create --out-dir '{}': {e}",
            out_dir.display()
        ))
    })?;
    let csv_path = out_dir.join(params.report_file_name());
    fs::write(&csv_path, &csv)?;

    let manifest = RunManifest::new(
        "experiment",
        serde_json::to_value(&params)?,
        params.seed(),
        vec![csv_path.clone()],
    );
    let manifest_path = sibling(&csv_path, "manifest.json");
    write_manifest(&manifest_path, &manifest)?;

    for check in &checks {
        println!("{}", check.verdict_line());
    }
    println!("report:   {}", csv_path.display());
    println!("manifest: {}", manifest_path.display());
    Ok(all_passed(&checks))
}

pub fn run_rerun(manifest_path: &Path) -> Result<bool> {
    let manifest = crate::manifest::load_manifest(manifest_path)?;
    let mismatch = |e: serde_json::Error| {
        Error::InvalidArgument(format!(
            "--manifest file '{}' has malformed '{}' params: {e}",
            manifest_path.display(),
            manifest.command,
        ))
    };
    match manifest.command.as_str() {
        "grow" => run_grow(serde_json::from_value(manifest.params.clone()).map_err(mismatch)?),
        "mst" => run_mst(serde_json::from_value(manifest.params.clone()).map_err(mismatch)?),
        "experiment" => {
            run_experiment(serde_json::from_value(manifest.params.clone()).map_err(mismatch)?)
        }
        other => Err(Error::InvalidArgument(format!(
            "manifest '{}' names unknown command '{other}'",
            manifest_path.display()
        ))),
    }
}
