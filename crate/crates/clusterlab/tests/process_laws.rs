//! Distributional laws of the growth process, checked over many reseeded
//! runs. Every test is deterministic: trial seeds come from `derive_seed`,
//! so a failure here is a code defect, not sampling noise (thresholds sit
//! at the 3-sigma / 0.999 level against intentionally loose targets).

use clusterlab::experiments::depth_tail_experiment;
use clusterlab::process::{GrowthConfig, gaussian_tail_upper, grow};
use clusterlab::rng::derive_seed;
use statrs::function::erf::erfc;

/// 0.999 quantile of the chi-square distribution with 6 degrees of freedom.
const CHI2_DF6_P999: f64 = 22.458;

#[test]
fn parent_choice_is_uniform_over_predecessors() {
    // Vertex 7 picks its parent uniformly among vertices 0..=6.
    let runs = 7000u64;
    let mut counts = [0u64; 7];
    for t in 0..runs {
        let seed = derive_seed(101, t);
        let c = grow(&GrowthConfig::new(1, 0.0, 8, seed)).unwrap();
        counts[c.parent(7).unwrap()] += 1;
    }
    let expected = runs as f64 / 7.0;
    let chi2: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    assert!(chi2 < CHI2_DF6_P999, "chi-square {chi2:.3} over counts {counts:?}");
}

#[test]
fn displacement_coordinates_follow_the_decay_schedule() {
    // Coordinates of X_s - X_parent(s) are N(0, (s+1)^(-2 alpha)) per axis.
    let alpha = 0.5;
    let runs = 4000usize;
    for step in [1usize, 5, 20] {
        let mut samples = Vec::with_capacity(runs * 2);
        for t in 0..runs {
            let seed = derive_seed(202 + step as u64, t as u64);
            let c = grow(&GrowthConfig::new(2, alpha, 21, seed)).unwrap();
            let p = c.parent(step).unwrap();
            for (a, b) in c.point(step).iter().zip(c.point(p)) {
                samples.push(a - b);
            }
        }
        let m = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / m;
        let variance =
            samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0);
        let sigma2 = ((step + 1) as f64).powf(-2.0 * alpha);

        let mean_se = (sigma2 / m).sqrt();
        assert!(
            mean.abs() <= 3.0 * mean_se,
            "step {step}: mean {mean:.5} further than 3 SE ({mean_se:.5}) from 0"
        );
        let var_se = sigma2 * (2.0 / (m - 1.0)).sqrt();
        assert!(
            (variance - sigma2).abs() <= 3.0 * var_se,
            "step {step}: variance {variance:.6} vs expected {sigma2:.6} (SE {var_se:.6})"
        );
    }
}

#[test]
fn mean_parent_index_is_half_the_step() {
    // Uniform on 0..=19: mean 9.5, variance (20^2 - 1)/12.
    let runs = 4000usize;
    let mut sum = 0.0;
    for t in 0..runs {
        let seed = derive_seed(303, t as u64);
        let c = grow(&GrowthConfig::new(1, 0.0, 21, seed)).unwrap();
        sum += c.parent(20).unwrap() as f64;
    }
    let mean = sum / runs as f64;
    let se = (399.0 / 12.0 / runs as f64).sqrt();
    assert!((mean - 9.5).abs() <= 3.0 * se, "mean parent {mean:.4}, SE {se:.4}");
}

#[test]
fn no_vertex_reaches_the_depth_ceiling() {
    // Expected outlier count 500 * 100^-3 = 5e-4 if the per-vertex bound
    // m^-4 holds, so a single observation flags a defect.
    let report = depth_tail_experiment(&[100], 500, 7).unwrap();
    assert_eq!(report.rows[0].violations, 0);
    assert!((report.rows[0].max_level as f64) < report.rows[0].threshold);
}

#[test]
fn analytic_tail_dominates_the_exact_gaussian_tail() {
    // The closed form sigma * exp(-x^2 / (2 sigma^2)) / (x sqrt(2 pi)) upper-bounds
    // P(N(0,sigma^2) >= x) = erfc(x/(sigma sqrt(2)))/2 for every x >= sigma.
    for sigma in [0.5, 1.0, 2.0, 10.0] {
        let mut z = 1.0f64;
        while z <= 8.0 {
            let x = z * sigma;
            let bound = gaussian_tail_upper(x, sigma).unwrap();
            let exact = 0.5 * erfc(z / std::f64::consts::SQRT_2);
            assert!(bound >= exact, "x={x}, sigma={sigma}: bound {bound} < exact {exact}");
            z += 0.125;
        }
    }
}

#[test]
fn far_tail_spot_value() {
    let bound = gaussian_tail_upper(10.0, 1.0).unwrap();
    assert!(
        (7.69e-24..7.70e-24).contains(&bound),
        "expected about 7.69e-24, got {bound:e}"
    );
    let exact = 0.5 * erfc(10.0 / std::f64::consts::SQRT_2);
    assert!(bound >= exact);
    assert!(bound / exact < 1.02, "bound is tight to about 1% this far out");
}
