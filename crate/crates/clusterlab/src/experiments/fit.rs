//! Ordinary least squares for scaling-exponent estimation.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Result of a simple linear regression `y ~ slope * x + intercept`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Fraction of y variance explained; 1 for an exact line.
    pub r_squared: f64,
    pub slope_std_err: f64,
    /// Half-width of the 95% confidence interval for the slope
    /// (Student t with `points - 2` degrees of freedom).
    pub ci95_half_width: f64,
    pub points: usize,
}

/// Least-squares line through `(xs, ys)`. Needs at least 3 points so the
/// slope has a residual degree of freedom for its confidence interval.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument(format!(
            "fit got {} x values and {} y values",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "fit needs at least 3 points for a confidence interval, got {n}"
        )));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("fit input contains a non-finite value".into()));
    }

    let nf = n as f64;
    let x_bar = xs.iter().sum::<f64>() / nf;
    let y_bar = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - x_bar;
        let dy = y - y_bar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("fit x values are all identical".into()));
    }

    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let residual_ss = (syy - slope * sxy).max(0.0);
    let r_squared = if syy > 0.0 { 1.0 - residual_ss / syy } else { 1.0 };
    let df = (n - 2) as f64;
    let slope_std_err = (residual_ss / df / sxx).sqrt();
    let t975 = StudentsT::new(0.0, 1.0, df)
        .expect("df >= 1 by the n >= 3 guard")
        .inverse_cdf(0.975);
    Ok(LineFit {
        slope,
        intercept,
        r_squared,
        slope_std_err,
        ci95_half_width: t975 * slope_std_err,
        points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_is_recovered() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let f = fit_line(&xs, &ys).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!((f.intercept - 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!(f.slope_std_err < 1e-9);
        assert!(f.ci95_half_width < 1e-8);
    }

    #[test]
    fn hand_computed_small_case() {
        // xs = 0..3, ys = [0, 1, 1, 2]: slope 0.6, intercept 0.1,
        // R^2 = 0.9, se = sqrt(0.02), t(df = 2, 97.5%) ~ 4.302653.
        let f = fit_line(&[0.0, 1.0, 2.0, 3.0], &[0.0, 1.0, 1.0, 2.0]).unwrap();
        assert!((f.slope - 0.6).abs() < 1e-12);
        assert!((f.intercept - 0.1).abs() < 1e-12);
        assert!((f.r_squared - 0.9).abs() < 1e-12);
        assert!((f.slope_std_err - 0.02f64.sqrt()).abs() < 1e-12);
        assert!((f.ci95_half_width - 4.302652729911275 * 0.02f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn constant_y_fits_flat_line() {
        let f = fit_line(&[0.0, 1.0, 2.0], &[5.0, 5.0, 5.0]).unwrap();
        assert_eq!(f.slope, 0.0);
        assert_eq!(f.r_squared, 1.0);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(fit_line(&[0.0, 1.0], &[0.0, 1.0, 2.0]).is_err());
        assert!(fit_line(&[0.0, 1.0], &[0.0, 1.0]).is_err());
        assert!(fit_line(&[1.0, 1.0, 1.0], &[0.0, 1.0, 2.0]).is_err());
        assert!(fit_line(&[0.0, 1.0, f64::NAN], &[0.0, 1.0, 2.0]).is_err());
        assert!(fit_line(&[0.0, 1.0, 2.0], &[0.0, f64::INFINITY, 2.0]).is_err());
    }

    #[test]
    fn confidence_interval_covers_a_noisy_truth() {
        // Deterministic "noise" from a fixed pattern; the fitted slope must
        // sit within its own 95% interval of the generating slope because
        // the perturbations are tiny relative to the x spread.
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.5).collect();
        let ys: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(i, x)| 1.5 * x - 2.0 + if i % 2 == 0 { 0.01 } else { -0.01 })
            .collect();
        let f = fit_line(&xs, &ys).unwrap();
        assert!((f.slope - 1.5).abs() <= f.ci95_half_width);
        assert!(f.r_squared > 0.999);
    }
}
