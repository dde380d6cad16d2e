//! File formats: cluster CSV, spanning-structure CSV, profile and urn
//! CSVs, and JSON sidecars.
//!
//! Floats in CSV are printed with 17 significant digits (`{:.16e}`), which
//! round-trips every finite `f64` exactly, so a file written from a run can
//! be reproduced byte for byte by re-running the same configuration.
//! Parse errors carry 1-based line numbers.

use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{SpanKind, SpanningStructure};
use crate::points::PointSet;
use crate::process::{Cluster, GrowthConfig, NO_PARENT};
use crate::tree::{AncestorPairProfile, DepthProfile, UrnMoments};

/// 17 significant digits; exact round-trip for every finite `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// 6 significant digits, for human-facing summaries.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Writes `index,parent,x0,...,x{d-1}` rows; roots get parent -1.
pub fn write_cluster_csv<W: Write>(mut w: W, cluster: &Cluster) -> Result<()> {
    write!(w, "index,parent")?;
    for axis in 0..cluster.dim() {
        write!(w, ",x{axis}")?;
    }
    writeln!(w)?;
    for i in 0..cluster.len() {
        let parent = cluster.parent(i).map_or(NO_PARENT, |p| p as i64);
        write!(w, "{i},{parent}")?;
        for c in cluster.point(i) {
            write!(w, ",{}", format_float(*c))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Reads the cluster CSV format back into points and parent pointers.
///
/// The config sidecar is not part of the CSV; callers that need a full
/// [`Cluster`] combine the result with a config via [`Cluster::from_parts`].
pub fn read_cluster_csv<R: BufRead>(reader: R) -> Result<(PointSet, Vec<Option<usize>>)> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file, expected a header line"))??;
    let mut fields = header.trim_end_matches(['\r', '\n']).split(',');
    for expected in ["index", "parent"] {
        let got = fields.next().unwrap_or("");
        if got != expected {
            return Err(parse_err(1, format!("expected column `{expected}`, found `{got}`")));
        }
    }
    let mut dim = 0usize;
    for got in fields {
        let expected = format!("x{dim}");
        if got != expected {
            return Err(parse_err(1, format!("expected column `{expected}`, found `{got}`")));
        }
        dim += 1;
    }
    if dim == 0 {
        return Err(parse_err(1, "header has no coordinate columns"));
    }

    let mut points = PointSet::new(dim);
    let mut parents: Vec<Option<usize>> = Vec::new();
    let mut coords = vec![0.0f64; dim];
    for (offset, line) in lines.enumerate() {
        let line_no = offset + 2;
        let line = line?;
        let row = line.trim_end_matches(['\r', '\n']);
        let mut fields = row.split(',');

        let index_field = fields.next().unwrap_or("");
        let index: usize = index_field
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad index `{index_field}`")))?;
        if index != points.len() {
            return Err(parse_err(
                line_no,
                format!("indices must be consecutive from 0, expected {}, found {index}", points.len()),
            ));
        }

        let parent_field = fields.next().unwrap_or("");
        let parent: i64 = parent_field
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad parent `{parent_field}`")))?;
        let parent = if parent == NO_PARENT {
            None
        } else if parent >= 0 && (parent as usize) < index {
            Some(parent as usize)
        } else {
            return Err(parse_err(
                line_no,
                format!("parent {parent} of vertex {index} is not -1 or an earlier index"),
            ));
        };

        for (axis, slot) in coords.iter_mut().enumerate() {
            let field = fields
                .next()
                .ok_or_else(|| parse_err(line_no, format!("missing coordinate x{axis}")))?;
            let value: f64 = field
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad coordinate `{field}`")))?;
            if !value.is_finite() {
                return Err(parse_err(line_no, format!("non-finite coordinate `{field}`")));
            }
            *slot = value;
        }
        if let Some(extra) = fields.next() {
            return Err(parse_err(line_no, format!("unexpected extra field `{extra}`")));
        }

        points.push(&coords);
        parents.push(parent);
    }
    if points.is_empty() {
        return Err(parse_err(2, "no data rows"));
    }
    Ok((points, parents))
}

/// Writes `u,v,length` rows in the structure's edge order.
pub fn write_edges_csv<W: Write>(mut w: W, structure: &SpanningStructure) -> Result<()> {
    writeln!(w, "u,v,length")?;
    for e in &structure.edges {
        writeln!(w, "{},{},{}", e.u, e.v, format_float(e.length))?;
    }
    Ok(())
}

/// Summary sidecar for a spanning structure over `n` points.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpanSummary {
    pub kind: SpanKind,
    pub n: usize,
    pub total_length: f64,
}

impl SpanSummary {
    pub fn new(structure: &SpanningStructure, n: usize) -> Self {
        Self { kind: structure.kind, n, total_length: structure.total_length }
    }
}

pub fn write_span_summary_json<W: Write>(mut w: W, summary: &SpanSummary) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, summary)?;
    writeln!(w)?;
    Ok(())
}

pub fn write_config_json<W: Write>(mut w: W, config: &GrowthConfig) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, config)?;
    writeln!(w)?;
    Ok(())
}

pub fn read_config_json<R: std::io::Read>(r: R) -> Result<GrowthConfig> {
    Ok(serde_json::from_reader(r)?)
}

/// Writes `level,count` rows, one per level from 0 to the max depth.
pub fn write_depth_profile_csv<W: Write>(mut w: W, profile: &DepthProfile) -> Result<()> {
    writeln!(w, "level,count")?;
    for (level, count) in profile.counts.iter().enumerate() {
        writeln!(w, "{level},{count}")?;
    }
    Ok(())
}

/// Writes `m,count` rows, one per vertex.
pub fn write_pair_profile_csv<W: Write>(mut w: W, profile: &AncestorPairProfile) -> Result<()> {
    writeln!(w, "m,count")?;
    for (m, count) in profile.counts.iter().enumerate() {
        writeln!(w, "{m},{count}")?;
    }
    Ok(())
}

/// Writes `m,n,mean,second_moment,bound` rows.
pub fn write_urn_csv<W: Write>(mut w: W, rows: &[UrnMoments]) -> Result<()> {
    writeln!(w, "m,n,mean,second_moment,bound")?;
    for u in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            u.m,
            u.n,
            format_float(u.mean),
            format_float(u.second_moment),
            format_float(u.upper_bound),
        )?;
    }
    Ok(())
}
