//! Structural statistics of the attachment forest.
//!
//! The attachment structure of a single-seed cluster is a random recursive
//! tree: vertex `i` picks its parent uniformly among `0..i`. That makes the
//! subtree size of vertex `m` exactly a Polya-Eggenberger urn count: start
//! the urn when vertex `m` appears (`1` white ball for `m`, `m - 1` blue
//! balls for the others, reinforcement `s = 1`) and run it once per later
//! vertex. [`urn_moments`] evaluates the closed-form first and second
//! moments of that urn; the Monte Carlo experiments check the simulated
//! subtree sizes against them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::process::Cluster;

/// Exact moments of the subtree-size urn for vertex `m` in a tree on `n`
/// vertices (1-based labels, `1 <= m <= n`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UrnMoments {
    pub m: usize,
    pub n: usize,
    /// `E(size) = n/m`.
    pub mean: f64,
    pub variance: f64,
    /// `E(size^2) = variance + mean^2`.
    pub second_moment: f64,
    /// The `2n^2/m^2` envelope that dominates the second moment.
    pub upper_bound: f64,
}

/// Unordered vertex pairs grouped by their lowest common ancestor.
#[derive(Debug, Clone, PartialEq)]
pub struct AncestorPairProfile {
    /// `counts[m]` = number of unordered pairs `{i, j}`, `i != j`, whose LCA
    /// is exactly `m`. Pairs in different trees (k > 1 roots) count nowhere.
    pub counts: Vec<u64>,
}

impl AncestorPairProfile {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Histogram of vertex levels.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthProfile {
    /// `counts[l]` = number of vertices at level `l`.
    pub counts: Vec<u64>,
    pub max_depth: usize,
}

/// Level of every vertex in one forward pass.
pub fn levels(cluster: &Cluster) -> Vec<usize> {
    let mut out = vec![0usize; cluster.len()];
    for i in 0..cluster.len() {
        if let Some(p) = cluster.parent(i) {
            out[i] = out[p] + 1;
        }
    }
    out
}

/// Subtree sizes of every vertex in one backward pass.
pub fn subtree_sizes(cluster: &Cluster) -> Vec<u64> {
    let n = cluster.len();
    let mut sizes = vec![1u64; n];
    for i in (0..n).rev() {
        if let Some(p) = cluster.parent(i) {
            sizes[p] += sizes[i];
        }
    }
    sizes
}

/// Number of vertices in the subtree rooted at `m`, counting `m` itself.
pub fn subtree_size(cluster: &Cluster, m: usize) -> Result<u64> {
    if m >= cluster.len() {
        return Err(Error::IndexOutOfBounds { index: m, len: cluster.len() });
    }
    Ok(subtree_sizes(cluster)[m])
}

/// Deepest vertex that is an ancestor of both `i` and `j` (every vertex is
/// its own ancestor). `None` when the two sit in different trees.
pub fn lowest_common_ancestor(cluster: &Cluster, i: usize, j: usize) -> Result<Option<usize>> {
    let n = cluster.len();
    if i >= n {
        return Err(Error::IndexOutOfBounds { index: i, len: n });
    }
    if j >= n {
        return Err(Error::IndexOutOfBounds { index: j, len: n });
    }
    let depth = |mut v: usize| {
        let mut d = 0usize;
        while let Some(p) = cluster.parent(v) {
            d += 1;
            v = p;
        }
        d
    };
    let (mut a, mut b) = (i, j);
    let (mut da, mut db) = (depth(a), depth(b));
    while da > db {
        a = cluster.parent(a).expect("depth accounting");
        da -= 1;
    }
    while db > da {
        b = cluster.parent(b).expect("depth accounting");
        db -= 1;
    }
    while a != b {
        match (cluster.parent(a), cluster.parent(b)) {
            (Some(pa), Some(pb)) => {
                a = pa;
                b = pb;
            }
            // Both are roots of different trees at equal depth 0.
            _ => return Ok(None),
        }
    }
    Ok(Some(a))
}

/// Pair counts by exact LCA, from subtree sizes.
///
/// Pairs with LCA exactly `m` are the pairs inside `m`'s subtree minus the
/// pairs inside each child subtree: `C(s_m, 2) - sum_c C(s_c, 2)`. One O(n)
/// pass; cross-checked against the quadratic pairwise scan in tests.
pub fn ancestor_pair_profile(cluster: &Cluster) -> AncestorPairProfile {
    let sizes = subtree_sizes(cluster);
    let choose2 = |s: u64| s * (s - 1) / 2;
    let mut counts: Vec<u64> = sizes.iter().map(|&s| choose2(s)).collect();
    for (i, &size) in sizes.iter().enumerate() {
        if let Some(p) = cluster.parent(i) {
            counts[p] -= choose2(size);
        }
    }
    AncestorPairProfile { counts }
}

/// Closed-form urn moments for the subtree size of vertex `m` at time `n`.
pub fn urn_moments(m: usize, n: usize) -> Result<UrnMoments> {
    if m == 0 {
        return Err(Error::InvalidArgument("urn index m must be >= 1".into()));
    }
    if m > n {
        return Err(Error::InvalidArgument(format!("urn requires m <= n, got m={m}, n={n}")));
    }
    let (mf, nf) = (m as f64, n as f64);
    // W0 = 1, B0 = m - 1, tau0 = m, s = 1, rounds = n - m:
    // mean = W0*s*rounds/tau0 + W0,
    // variance = W0*B0*s^2*rounds*(s*rounds + tau0) / (tau0^2*(tau0 + s)).
    let rounds = nf - mf;
    // rounds/m + 1 = n/m exactly in the reals; compute the canonical form so
    // the reported mean is the float n/m, not an ulp off it.
    let mean = nf / mf;
    let variance = (mf - 1.0) * rounds * (rounds + mf) / (mf * mf * (mf + 1.0));
    let second_moment = variance + mean * mean;
    let upper_bound = 2.0 * nf * nf / (mf * mf);
    Ok(UrnMoments { m, n, mean, variance, second_moment, upper_bound })
}

/// Histogram of levels over all vertices, plus the maximum depth.
pub fn depth_profile(cluster: &Cluster) -> DepthProfile {
    let lv = levels(cluster);
    let max_depth = lv.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0u64; max_depth + 1];
    for l in lv {
        counts[l] += 1;
    }
    DepthProfile { counts, max_depth }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{GrowthConfig, grow};

    fn cluster(n: usize, seed: u64) -> Cluster {
        grow(&GrowthConfig::new(2, 0.5, n, seed)).unwrap()
    }

    #[test]
    fn root_subtree_is_the_whole_tree() {
        let c = cluster(200, 4);
        assert_eq!(subtree_size(&c, 0).unwrap(), 200);
    }

    #[test]
    fn leaves_have_unit_subtrees() {
        let c = cluster(100, 9);
        let sizes = subtree_sizes(&c);
        let mut has_child = vec![false; c.len()];
        for i in 0..c.len() {
            if let Some(p) = c.parent(i) {
                has_child[p] = true;
            }
        }
        for i in 0..c.len() {
            if !has_child[i] {
                assert_eq!(sizes[i], 1);
            }
        }
        assert!(subtree_size(&c, 100).is_err());
    }

    #[test]
    fn sizes_satisfy_the_child_sum_identity() {
        let c = cluster(300, 17);
        let sizes = subtree_sizes(&c);
        let mut child_sum = vec![0u64; c.len()];
        for (i, &size) in sizes.iter().enumerate() {
            if let Some(p) = c.parent(i) {
                child_sum[p] += size;
            }
        }
        for i in 0..c.len() {
            assert_eq!(sizes[i], 1 + child_sum[i]);
        }
    }

    #[test]
    fn lca_basics() {
        let c = cluster(50, 3);
        for i in [0usize, 7, 49] {
            assert_eq!(lowest_common_ancestor(&c, i, i).unwrap(), Some(i));
            assert_eq!(lowest_common_ancestor(&c, 0, i).unwrap(), Some(0));
        }
        assert!(lowest_common_ancestor(&c, 0, 50).is_err());
    }

    #[test]
    fn lca_is_none_across_trees() {
        let cfg = GrowthConfig::new(2, 0.5, 2, 1)
            .with_initial_points(vec![vec![0.0, 0.0], vec![5.0, 5.0]]);
        let c = grow(&cfg).unwrap();
        assert_eq!(lowest_common_ancestor(&c, 0, 1).unwrap(), None);
    }

    #[test]
    fn two_vertex_profile_is_one_root_pair() {
        let c = cluster(2, 8);
        let profile = ancestor_pair_profile(&c);
        assert_eq!(profile.counts, vec![1, 0]);
    }

    #[test]
    fn profile_counts_every_pair_once_in_a_single_tree() {
        for seed in 0..5 {
            let c = cluster(120, seed);
            let n = c.len() as u64;
            assert_eq!(ancestor_pair_profile(&c).total(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn profile_skips_cross_tree_pairs() {
        let cfg = GrowthConfig::new(2, 0.5, 40, 6)
            .with_initial_points(vec![vec![0.0, 0.0], vec![4.0, 0.0]]);
        let c = grow(&cfg).unwrap();
        let sizes = subtree_sizes(&c);
        let cross = sizes[0] * sizes[1];
        let n = c.len() as u64;
        assert_eq!(ancestor_pair_profile(&c).total(), n * (n - 1) / 2 - cross);
    }

    #[test]
    fn urn_moment_edge_cases() {
        let eq = urn_moments(10, 10).unwrap();
        assert_eq!(eq.mean, 1.0);
        assert_eq!(eq.variance, 0.0);

        let root = urn_moments(1, 57).unwrap();
        assert_eq!(root.mean, 57.0);
        assert_eq!(root.variance, 0.0);

        assert!(urn_moments(0, 10).is_err());
        assert!(urn_moments(11, 10).is_err());
    }

    #[test]
    fn urn_moments_m2_n10() {
        let u = urn_moments(2, 10).unwrap();
        assert_eq!(u.mean, 5.0);
        // variance = (m-1)*n*(n-m)/(m^2(m+1)) = 10*8/12 = 20/3
        assert!((u.variance - 20.0 / 3.0).abs() < 1e-12);
        assert!((u.second_moment - 95.0 / 3.0).abs() < 1e-12);
        assert_eq!(u.upper_bound, 50.0);
        assert!(u.second_moment <= u.upper_bound);
    }

    #[test]
    fn urn_second_moment_never_exceeds_envelope_on_full_grid() {
        for n in 1..=1000usize {
            for m in 1..=n {
                let u = urn_moments(m, n).unwrap();
                assert!(
                    u.second_moment <= u.upper_bound * (1.0 + 1e-12),
                    "violation at m={m}, n={n}: {} > {}",
                    u.second_moment,
                    u.upper_bound
                );
                assert_eq!(u.mean, n as f64 / m as f64);
            }
        }
    }

    #[test]
    fn depth_profile_tiny_cases() {
        let c1 = cluster(1, 0);
        assert_eq!(depth_profile(&c1).counts, vec![1]);
        let c2 = cluster(2, 0);
        let p = depth_profile(&c2);
        assert_eq!(p.counts, vec![1, 1]);
        assert_eq!(p.max_depth, 1);
    }

    #[test]
    fn depth_profile_counts_all_vertices() {
        let c = cluster(500, 13);
        let p = depth_profile(&c);
        assert_eq!(p.counts.iter().sum::<u64>(), 500);
        assert_eq!(p.counts[0], 1);
    }
}
