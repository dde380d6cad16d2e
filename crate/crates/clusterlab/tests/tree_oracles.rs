//! Oracles for the attachment-tree analytics: brute-force ancestor sets,
//! quadratic pair scans, and Monte Carlo urn moments.

use clusterlab::process::{Cluster, GrowthConfig, grow};
use clusterlab::rng::derive_seed;
use clusterlab::tree::{
    ancestor_pair_profile, levels, lowest_common_ancestor, subtree_sizes, urn_moments,
};

fn tree(n: usize, seed: u64) -> Cluster {
    grow(&GrowthConfig::new(1, 0.0, n, seed)).unwrap()
}

fn forest(n: usize, roots: usize, seed: u64) -> Cluster {
    let initial = vec![vec![0.0]; roots];
    grow(&GrowthConfig::new(1, 0.0, n, seed).with_initial_points(initial)).unwrap()
}

fn ancestor_chain(c: &Cluster, mut v: usize) -> Vec<usize> {
    let mut chain = vec![v];
    while let Some(p) = c.parent(v) {
        chain.push(p);
        v = p;
    }
    chain
}

/// Deepest common element of the two ancestor chains, by set scan.
fn brute_lca(c: &Cluster, i: usize, j: usize) -> Option<usize> {
    let up_j = ancestor_chain(c, j);
    ancestor_chain(c, i).into_iter().find(|a| up_j.contains(a))
}

#[test]
fn lca_matches_brute_force_ancestor_sets() {
    for seed in 0..20u64 {
        let c = tree(50, seed);
        for i in 0..c.len() {
            for j in i..c.len() {
                assert_eq!(
                    lowest_common_ancestor(&c, i, j).unwrap(),
                    brute_lca(&c, i, j),
                    "seed {seed}, pair ({i}, {j})"
                );
            }
        }
    }
}

#[test]
fn lca_handles_forests_and_bad_indices() {
    let f = forest(40, 3, 5);
    for i in 0..f.len() {
        for j in 0..f.len() {
            assert_eq!(lowest_common_ancestor(&f, i, j).unwrap(), brute_lca(&f, i, j));
        }
    }
    assert!(lowest_common_ancestor(&f, 0, 40).is_err());
    assert!(lowest_common_ancestor(&f, 41, 0).is_err());
    // Distinct roots never share an ancestor.
    assert_eq!(lowest_common_ancestor(&f, 0, 1).unwrap(), None);
}

#[test]
fn pair_profile_matches_pairwise_lca() {
    for (n, roots, seed) in [(200usize, 1usize, 1u64), (150, 1, 2), (120, 4, 3)] {
        let c = forest(n, roots, seed);
        let fast = ancestor_pair_profile(&c);
        let mut slow = vec![0u64; n];
        for i in 0..n {
            for j in i + 1..n {
                if let Some(m) = lowest_common_ancestor(&c, i, j).unwrap() {
                    slow[m] += 1;
                }
            }
        }
        assert_eq!(fast.counts, slow, "n={n} roots={roots} seed={seed}");
    }
}

#[test]
fn subtree_sizes_agree_with_explicit_descendant_counts() {
    let c = tree(300, 9);
    let sizes = subtree_sizes(&c);
    // Count descendants by walking every vertex's ancestor chain.
    let mut counts = vec![0u64; c.len()];
    for v in 0..c.len() {
        for a in ancestor_chain(&c, v) {
            counts[a] += 1;
        }
    }
    assert_eq!(sizes, counts);
}

#[test]
fn monte_carlo_subtree_moments_track_the_urn_formulas() {
    let n = 200usize;
    let trials = 600usize;
    for (row, m) in [2usize, 5, 20].into_iter().enumerate() {
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for t in 0..trials {
            let c = tree(n, derive_seed(400 + row as u64, t as u64));
            let w = subtree_sizes(&c)[m - 1] as f64;
            sum += w;
            sum_sq += w * w;
        }
        let tf = trials as f64;
        let mean = sum / tf;
        let second = sum_sq / tf;
        let analytic = urn_moments(m, n).unwrap();

        let sample_var = (second - mean * mean).max(0.0) * tf / (tf - 1.0);
        let mean_se = (sample_var / tf).sqrt();
        assert!(
            (mean - analytic.mean).abs() <= 3.0 * mean_se,
            "m={m}: mean {mean:.3} vs analytic {:.3} (SE {mean_se:.3})",
            analytic.mean
        );
        assert!(
            second <= analytic.upper_bound * 1.2,
            "m={m}: second moment {second:.1} well past the envelope {:.1}",
            analytic.upper_bound
        );
    }
}

#[test]
fn max_depth_grows_like_e_times_log_n() {
    // Classical recursive-tree behavior: max depth / ln n tends to e.
    // At n = 2000 the ratio sits below e (the correction term is
    // negative), so accept a generous band around it.
    let n = 2000usize;
    let trials = 200usize;
    let mut sum = 0.0;
    for t in 0..trials {
        let c = tree(n, derive_seed(500, t as u64));
        sum += levels(&c).into_iter().max().unwrap() as f64;
    }
    let ratio = sum / trials as f64 / (n as f64).ln();
    assert!((2.0..3.0).contains(&ratio), "mean max depth / ln n = {ratio:.3}");
}
