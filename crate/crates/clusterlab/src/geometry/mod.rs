//! Euclidean combinatorial structures on point clouds: minimum spanning
//! trees (quadratic Prim oracle and the dual-tree Boruvka engine),
//! fixed-radius close-pair counting, and tour-length bounds.

mod boruvka;
mod kdtree;

pub use boruvka::emst_fast;
pub use kdtree::SpatialIndex;

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::{PointSet, dist2, pairwise_sum};
use crate::process::Cluster;

/// What a [`SpanningStructure`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanKind {
    Emst,
    AttachmentTree,
    TourBound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

/// An edge list with its summed length. `total_length` is accumulated by
/// pairwise summation over the edge order (sorted by `(u, v)`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningStructure {
    pub kind: SpanKind,
    pub edges: Vec<Edge>,
    pub total_length: f64,
}

impl SpanningStructure {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// The attachment forest of a cluster as a spanning structure.
pub fn attachment_structure(cluster: &Cluster) -> SpanningStructure {
    let mut edges: Vec<Edge> = cluster
        .parents()
        .iter()
        .enumerate()
        .filter_map(|(i, p)| {
            p.map(|j| Edge {
                u: j,
                v: i,
                length: dist2(cluster.point(i), cluster.point(j)).sqrt(),
            })
        })
        .collect();
    edges.sort_unstable_by_key(|e| (e.u, e.v));
    let lengths: Vec<f64> = edges.iter().map(|e| e.length).collect();
    SpanningStructure {
        kind: SpanKind::AttachmentTree,
        total_length: pairwise_sum(&lengths),
        edges,
    }
}

/// Exact Euclidean MST by Prim's algorithm over the implicit complete
/// graph: O(n^2) time, O(n) memory. Distance ties break toward the
/// lexicographically smaller `(min index, max index)` edge, so the edge
/// set is deterministic.
pub fn emst_exact(points: &PointSet) -> Result<SpanningStructure> {
    let n = points.len();
    if n == 0 {
        return Err(Error::InvalidArgument("emst requires at least one point".into()));
    }
    points.check_finite()?;

    let mut in_tree = vec![false; n];
    let mut best_d2 = vec![f64::INFINITY; n];
    let mut best_from = vec![0usize; n];
    best_d2[0] = 0.0;

    let edge_key = |from: usize, to: usize| -> (usize, usize) {
        if from < to { (from, to) } else { (to, from) }
    };

    let mut edges: Vec<Edge> = Vec::with_capacity(n - 1);
    for _ in 0..n {
        let mut u = usize::MAX;
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            if u == usize::MAX
                || best_d2[v] < best_d2[u]
                || (best_d2[v] == best_d2[u]
                    && edge_key(best_from[v], v) < edge_key(best_from[u], u))
            {
                u = v;
            }
        }
        in_tree[u] = true;
        if best_d2[u] > 0.0 || u != 0 {
            let (a, b) = edge_key(best_from[u], u);
            edges.push(Edge { u: a, v: b, length: best_d2[u].sqrt() });
        }
        let pu = points.point(u);
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            let d2 = dist2(pu, points.point(v));
            if d2 < best_d2[v]
                || (d2 == best_d2[v] && edge_key(u, v) < edge_key(best_from[v], v))
            {
                best_d2[v] = d2;
                best_from[v] = u;
            }
        }
    }

    edges.sort_unstable_by_key(|e| (e.u, e.v));
    let lengths: Vec<f64> = edges.iter().map(|e| e.length).collect();
    Ok(SpanningStructure {
        kind: SpanKind::Emst,
        total_length: pairwise_sum(&lengths),
        edges,
    })
}

/// Offsets in `{-1,0,1}^d` whose first nonzero component is positive; each
/// unordered cell pair is visited from exactly one side.
fn forward_offsets(dim: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::with_capacity(3usize.pow(dim as u32) / 2);
    let mut current = vec![-1i64; dim];
    'outer: loop {
        if current.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0) {
            out.push(current.clone());
        }
        for slot in current.iter_mut().rev() {
            if *slot < 1 {
                *slot += 1;
                continue 'outer;
            }
            *slot = -1;
        }
        return out;
    }
}

/// Exact number of unordered point pairs at Euclidean distance <= `delta`
/// (boundary inclusive). Uniform grid with cell side `delta`; candidate
/// pairs only come from the 3^d surrounding cells, so the count is exact.
pub fn close_pairs(points: &PointSet, delta: f64) -> Result<u64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    points.check_finite()?;
    let n = points.len();
    if n < 2 {
        return Ok(0);
    }
    let dim = points.dim();
    let delta2 = delta * delta;

    let mut cells: HashMap<Box<[i64]>, Vec<u32>> = HashMap::with_capacity(n);
    let mut key = vec![0i64; dim];
    for (i, p) in points.iter().enumerate() {
        for (k, &c) in key.iter_mut().zip(p) {
            *k = (c / delta).floor() as i64;
        }
        cells.entry(key.clone().into_boxed_slice()).or_default().push(i as u32);
    }

    let offsets = forward_offsets(dim);
    let mut count = 0u64;
    let mut neighbor = vec![0i64; dim];
    for (cell_key, members) in &cells {
        for (a, &i) in members.iter().enumerate() {
            let pi = points.point(i as usize);
            for &j in &members[a + 1..] {
                if dist2(pi, points.point(j as usize)) <= delta2 {
                    count += 1;
                }
            }
        }
        for off in &offsets {
            for ((nk, &ck), &o) in neighbor.iter_mut().zip(cell_key.iter()).zip(off) {
                *nk = ck + o;
            }
            if let Some(other) = cells.get(neighbor.as_slice()) {
                for &i in members {
                    let pi = points.point(i as usize);
                    for &j in other {
                        if dist2(pi, points.point(j as usize)) <= delta2 {
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(count)
}

/// `(T, 2T)` where `T` is the Euclidean MST length: lower and upper bounds
/// on the optimal closed tour through the points. For `n = 2` the "tour"
/// degenerates to traversing the single edge twice, and `2T` is exact.
pub fn tsp_bounds(points: &PointSet) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "tour bounds require at least two points".into(),
        ));
    }
    let t = emst_fast(points)?.total_length;
    Ok((t, 2.0 * t))
}

/// Lower-bound witness for spanning-structure length: a spanning tree has
/// `n - 1` edges and at most `count_below` of them can join a pair closer
/// than `delta`, so at least `n - 1 - count_below` edges are longer than
/// `delta`. Returns `max(0, n - 1 - count_below) * delta`.
pub fn mst_length_per_edge_floor(n: usize, count_below: u64, delta: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let needed = (n as i128 - 1) - count_below as i128;
    if needed > 0 { needed as f64 * delta } else { 0.0 }
}
