//! Property-based checks. Scale factors are powers of two so scaled
//! coordinates, squared distances, and square roots stay exactly
//! representable and the scaling laws hold bit for bit, not just
//! approximately.

use clusterlab::geometry::{close_pairs, emst_fast};
use clusterlab::io::{read_cluster_csv, write_cluster_csv};
use clusterlab::points::PointSet;
use clusterlab::process::{GrowthConfig, grow};
use clusterlab::tree::{levels, subtree_sizes, urn_moments};
use proptest::prelude::*;

fn point_set(max_points: usize) -> impl Strategy<Value = PointSet> {
    (1usize..=3, 2usize..=max_points).prop_flat_map(|(dim, n)| {
        prop::collection::vec(-100.0..100.0f64, dim * n)
            .prop_map(move |coords| PointSet::from_coords(dim, coords).unwrap())
    })
}

fn growth_config() -> impl Strategy<Value = GrowthConfig> {
    (1usize..=3, 0.0..1.5f64, 0usize..50, any::<u64>(), 1usize..=3).prop_flat_map(
        |(dim, alpha, extra, seed, roots)| {
            prop::collection::vec(prop::collection::vec(-10.0..10.0f64, dim), roots).prop_map(
                move |initials| {
                    GrowthConfig::new(dim, alpha, roots + extra, seed)
                        .with_initial_points(initials)
                },
            )
        },
    )
}

fn scaled(ps: &PointSet, lambda: f64) -> PointSet {
    let coords = ps.coords().iter().map(|c| lambda * c).collect();
    PointSet::from_coords(ps.dim(), coords).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn close_pair_count_is_exactly_scale_invariant(
        ps in point_set(120),
        k in -6i32..=6,
        delta in 0.01..10.0f64,
    ) {
        let lambda = 2f64.powi(k);
        let base = close_pairs(&ps, delta).unwrap();
        let scaled_count = close_pairs(&scaled(&ps, lambda), lambda * delta).unwrap();
        prop_assert_eq!(base, scaled_count);
    }

    #[test]
    fn mst_scales_exactly_under_dyadic_scaling(ps in point_set(80), k in -4i32..=4) {
        let lambda = 2f64.powi(k);
        let base = emst_fast(&ps).unwrap();
        let big = emst_fast(&scaled(&ps, lambda)).unwrap();
        prop_assert_eq!(big.edges.len(), base.edges.len());
        for (a, b) in base.edges.iter().zip(&big.edges) {
            prop_assert_eq!((a.u, a.v), (b.u, b.v));
            prop_assert_eq!((lambda * a.length).to_bits(), b.length.to_bits());
        }
        prop_assert_eq!((lambda * base.total_length).to_bits(), big.total_length.to_bits());
    }

    #[test]
    fn mst_is_a_spanning_tree(ps in point_set(60)) {
        let t = emst_fast(&ps).unwrap();
        prop_assert_eq!(t.edges.len(), ps.len() - 1);
        let mut parent: Vec<usize> = (0..ps.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &t.edges {
            let (ru, rv) = (find(&mut parent, e.u), find(&mut parent, e.v));
            prop_assert_ne!(ru, rv, "edge ({}, {}) closes a cycle", e.u, e.v);
            parent[ru] = rv;
        }
        prop_assert!(t.total_length >= 0.0);
    }

    #[test]
    fn urn_moments_hold_across_the_grid(n in 1usize..=1000) {
        // Spot the axes rather than the full grid per case.
        for m in [1, 2, n / 2 + 1, n.max(2) - 1, n] {
            let m = m.clamp(1, n);
            let u = urn_moments(m, n).unwrap();
            prop_assert_eq!(u.mean, n as f64 / m as f64);
            prop_assert!(u.variance >= 0.0);
            prop_assert!((u.second_moment - (u.variance + u.mean * u.mean)).abs() < 1e-9);
            prop_assert!(u.second_moment <= u.upper_bound * (1.0 + 1e-12));
        }
        prop_assert_eq!(urn_moments(n, n).unwrap().variance, 0.0);
    }

    #[test]
    fn grown_clusters_satisfy_their_structural_invariants(cfg in growth_config()) {
        let c = grow(&cfg).unwrap();
        prop_assert_eq!(c.len(), cfg.n_points);
        let roots = cfg.initial_points.len();
        for i in 0..roots {
            prop_assert_eq!(c.parent(i), None);
        }
        for i in roots..c.len() {
            prop_assert!(c.parent(i).unwrap() < i);
        }
        prop_assert!(c.radius().is_finite());
        let lv = levels(&c);
        let sizes = subtree_sizes(&c);
        let total: u64 = (0..c.len()).filter(|i| c.parent(*i).is_none()).map(|i| sizes[i]).sum();
        prop_assert_eq!(total, c.len() as u64);
        for &level in &lv {
            prop_assert!(level < c.len());
        }
    }

    #[test]
    fn cluster_csv_round_trip_preserves_bits(cfg in growth_config()) {
        let c = grow(&cfg).unwrap();
        let mut buf = Vec::new();
        write_cluster_csv(&mut buf, &c).unwrap();
        let (points, parents) = read_cluster_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(parents.as_slice(), c.parents());
        prop_assert_eq!(points.dim(), c.dim());
        for (a, b) in points.coords().iter().zip(c.points().coords()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
