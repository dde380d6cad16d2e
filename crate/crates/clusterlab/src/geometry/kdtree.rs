//! Bounding-box kd-tree over a [`PointSet`].
//!
//! Median splits on the widest dimension, tight boxes recomputed per node,
//! leaves hold contiguous ranges of a point permutation. Supports
//! nearest-neighbor and radius queries plus the dual-tree traversal the
//! MST engine runs directly on the node arrays.

use crate::error::Result;
use crate::points::{PointSet, dist2};

pub(crate) const NO_CHILD: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Node {
    pub start: u32,
    pub end: u32,
    pub left: u32,
    pub right: u32,
}

impl Node {
    #[inline]
    pub fn is_leaf(&self) -> bool {
        self.left == NO_CHILD
    }

    #[inline]
    pub fn count(&self) -> u32 {
        self.end - self.start
    }
}

/// Spatial index over a borrowed point set.
pub struct SpatialIndex<'a> {
    points: &'a PointSet,
    /// Point ids grouped so each node covers `perm[start..end]`.
    perm: Vec<u32>,
    nodes: Vec<Node>,
    /// Per node: `dim` minima then `dim` maxima.
    bounds: Vec<f64>,
    leaf_size: usize,
}

impl<'a> SpatialIndex<'a> {
    /// Builds the tree. Rejects empty sets and non-finite coordinates.
    pub fn build(points: &'a PointSet, leaf_size: usize) -> Result<Self> {
        points.check_finite()?;
        if points.is_empty() {
            return Err(crate::error::Error::InvalidArgument(
                "cannot index an empty point set".into(),
            ));
        }
        let n = points.len();
        let leaf_size = leaf_size.max(1);
        let mut index = Self {
            points,
            perm: (0..n as u32).collect(),
            nodes: Vec::with_capacity(2 * n / leaf_size + 1),
            bounds: Vec::new(),
            leaf_size,
        };
        index.build_node(0, n);
        Ok(index)
    }

    fn build_node(&mut self, start: usize, end: usize) -> u32 {
        let dim = self.points.dim();
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            start: start as u32,
            end: end as u32,
            left: NO_CHILD,
            right: NO_CHILD,
        });

        // Tight bounding box over the covered points.
        let base = self.bounds.len();
        self.bounds.extend(std::iter::repeat_n(f64::INFINITY, dim));
        self.bounds.extend(std::iter::repeat_n(f64::NEG_INFINITY, dim));
        for &p in &self.perm[start..end] {
            let coords = self.points.point(p as usize);
            for (axis, &c) in coords.iter().enumerate() {
                if c < self.bounds[base + axis] {
                    self.bounds[base + axis] = c;
                }
                if c > self.bounds[base + dim + axis] {
                    self.bounds[base + dim + axis] = c;
                }
            }
        }

        if end - start > self.leaf_size {
            let mut split_axis = 0;
            let mut widest = -1.0;
            for axis in 0..dim {
                let spread = self.bounds[base + dim + axis] - self.bounds[base + axis];
                if spread > widest {
                    widest = spread;
                    split_axis = axis;
                }
            }
            let mid = (start + end) / 2;
            let points = self.points;
            self.perm[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
                let ca = points.point(a as usize)[split_axis];
                let cb = points.point(b as usize)[split_axis];
                ca.partial_cmp(&cb).expect("finite coordinates")
            });
            let left = self.build_node(start, mid);
            let right = self.build_node(mid, end);
            self.nodes[id as usize].left = left;
            self.nodes[id as usize].right = right;
        }
        id
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub(crate) fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub(crate) fn perm(&self) -> &[u32] {
        &self.perm
    }

    pub(crate) fn points(&self) -> &PointSet {
        self.points
    }

    #[inline]
    pub(crate) fn node_min(&self, node: u32) -> &[f64] {
        let dim = self.points.dim();
        let base = node as usize * 2 * dim;
        &self.bounds[base..base + dim]
    }

    #[inline]
    pub(crate) fn node_max(&self, node: u32) -> &[f64] {
        let dim = self.points.dim();
        let base = node as usize * 2 * dim;
        &self.bounds[base + dim..base + 2 * dim]
    }

    /// Squared distance from `q` to the box of `node` (0 inside).
    pub(crate) fn mindist2_point(&self, q: &[f64], node: u32) -> f64 {
        let (lo, hi) = (self.node_min(node), self.node_max(node));
        let mut acc = 0.0;
        for axis in 0..q.len() {
            let gap = (lo[axis] - q[axis]).max(q[axis] - hi[axis]).max(0.0);
            acc += gap * gap;
        }
        acc
    }

    /// Squared distance between the boxes of two nodes (0 if they overlap).
    pub(crate) fn mindist2_nodes(&self, a: u32, b: u32) -> f64 {
        let dim = self.points.dim();
        let (alo, ahi) = (self.node_min(a), self.node_max(a));
        let (blo, bhi) = (self.node_min(b), self.node_max(b));
        let mut acc = 0.0;
        for axis in 0..dim {
            let gap = (blo[axis] - ahi[axis]).max(alo[axis] - bhi[axis]).max(0.0);
            acc += gap * gap;
        }
        acc
    }

    /// Index and squared distance of the point closest to `q`.
    pub fn nearest_neighbor(&self, q: &[f64]) -> (usize, f64) {
        debug_assert_eq!(q.len(), self.points.dim());
        let mut best = (usize::MAX, f64::INFINITY);
        self.nearest_rec(q, 0, &mut best);
        best
    }

    fn nearest_rec(&self, q: &[f64], node: u32, best: &mut (usize, f64)) {
        if self.mindist2_point(q, node) > best.1 {
            return;
        }
        let nd = self.nodes[node as usize];
        if nd.is_leaf() {
            for &p in &self.perm[nd.start as usize..nd.end as usize] {
                let d2 = dist2(q, self.points.point(p as usize));
                if d2 < best.1 || (d2 == best.1 && (p as usize) < best.0) {
                    *best = (p as usize, d2);
                }
            }
            return;
        }
        let (dl, dr) = (
            self.mindist2_point(q, nd.left),
            self.mindist2_point(q, nd.right),
        );
        if dl <= dr {
            self.nearest_rec(q, nd.left, best);
            self.nearest_rec(q, nd.right, best);
        } else {
            self.nearest_rec(q, nd.right, best);
            self.nearest_rec(q, nd.left, best);
        }
    }

    /// All point indices within distance `r` of `q` (inclusive), ascending.
    pub fn within_radius(&self, q: &[f64], r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.radius_rec(q, r * r, 0, &mut out);
        out.sort_unstable();
        out
    }

    fn radius_rec(&self, q: &[f64], r2: f64, node: u32, out: &mut Vec<usize>) {
        if self.mindist2_point(q, node) > r2 {
            return;
        }
        let nd = self.nodes[node as usize];
        if nd.is_leaf() {
            for &p in &self.perm[nd.start as usize..nd.end as usize] {
                if dist2(q, self.points.point(p as usize)) <= r2 {
                    out.push(p as usize);
                }
            }
            return;
        }
        self.radius_rec(q, r2, nd.left, out);
        self.radius_rec(q, r2, nd.right, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedStream;

    fn random_points(n: usize, dim: usize, seed: u64) -> PointSet {
        let mut s = SeedStream::new(seed);
        let mut ps = PointSet::with_capacity(dim, n);
        let mut buf = vec![0.0; dim];
        for _ in 0..n {
            for c in buf.iter_mut() {
                *c = s.next_unit() * 10.0 - 5.0;
            }
            ps.push(&buf);
        }
        ps
    }

    #[test]
    fn every_point_lands_in_exactly_one_leaf() {
        let ps = random_points(500, 3, 1);
        let idx = SpatialIndex::build(&ps, 8).unwrap();
        let mut seen = vec![0u8; ps.len()];
        for node in idx.nodes() {
            if node.is_leaf() {
                for &p in &idx.perm()[node.start as usize..node.end as usize] {
                    seen[p as usize] += 1;
                }
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn child_boxes_nest_inside_parents() {
        let ps = random_points(400, 2, 2);
        let idx = SpatialIndex::build(&ps, 8).unwrap();
        for (id, node) in idx.nodes().iter().enumerate() {
            if !node.is_leaf() {
                for child in [node.left, node.right] {
                    for axis in 0..2 {
                        assert!(idx.node_min(child)[axis] >= idx.node_min(id as u32)[axis]);
                        assert!(idx.node_max(child)[axis] <= idx.node_max(id as u32)[axis]);
                    }
                }
            }
        }
    }

    #[test]
    fn nearest_matches_brute_force() {
        for dim in [1, 2, 4] {
            let ps = random_points(300, dim, 3 + dim as u64);
            let idx = SpatialIndex::build(&ps, 4).unwrap();
            let queries = random_points(50, dim, 77 + dim as u64);
            for q in queries.iter() {
                let (_, got_d2) = idx.nearest_neighbor(q);
                let want = ps
                    .iter()
                    .map(|p| dist2(q, p))
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(got_d2, want);
            }
        }
    }

    #[test]
    fn radius_query_matches_brute_force() {
        let ps = random_points(300, 2, 5);
        let idx = SpatialIndex::build(&ps, 4).unwrap();
        let q = [0.25, -0.75];
        for r in [0.1, 1.0, 3.0] {
            let got = idx.within_radius(&q, r);
            let want: Vec<usize> = (0..ps.len())
                .filter(|&i| dist2(&q, ps.point(i)) <= r * r)
                .collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn duplicate_points_still_build_finite_trees() {
        let mut ps = PointSet::new(2);
        for _ in 0..100 {
            ps.push(&[1.0, 1.0]);
        }
        let idx = SpatialIndex::build(&ps, 4).unwrap();
        assert!(idx.nodes().len() < 2 * 100);
        let (_, d2) = idx.nearest_neighbor(&[1.0, 1.0]);
        assert_eq!(d2, 0.0);
    }

    #[test]
    fn rejects_empty_and_non_finite_inputs() {
        let empty = PointSet::new(2);
        assert!(SpatialIndex::build(&empty, 4).is_err());
        let bad = PointSet::from_coords(1, vec![0.0, f64::INFINITY]).unwrap();
        assert!(SpatialIndex::build(&bad, 4).is_err());
    }
}
