//! Small summaries shared by the experiments.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

/// Binomial standard error `sqrt(p (1 - p) / r)`.
pub fn binomial_stderr(p: f64, r: usize) -> f64 {
    if r == 0 {
        return f64::NAN;
    }
    (p * (1.0 - p) / r as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    /// Unbiased variance.
    pub variance: f64,
    /// `sqrt(variance / count)`
    pub stderr: f64,
    pub count: usize,
}

/// Welford's one-pass moments, folded in slice order.
pub fn moments(xs: &[f64]) -> Moments {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let d = x - mean;
        mean += d / (i + 1) as f64;
        m2 += d * (x - mean);
    }
    let count = xs.len();
    let variance = if count > 1 {
        m2 / (count - 1) as f64
    } else {
        0.0
    };
    Moments {
        mean,
        variance,
        stderr: (variance / count.max(1) as f64).sqrt(),
        count,
    }
}

/// Kolmogorov–Smirnov distance between the empirical law of `xs` and
/// `N(0, variance)`.
pub fn ks_to_normal(xs: &[f64], variance: f64) -> f64 {
    let normal = Normal::new(0.0, variance.sqrt()).expect("positive variance");
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let r = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0, |d: f64, (i, &x)| {
        let c = normal.cdf(x);
        d.max(c - i as f64 / r).max((i + 1) as f64 / r - c)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_of_small_set() {
        let m = moments(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.mean, 2.5);
        assert!((m.variance - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ks_of_quantiles_is_small() {
        let normal = Normal::new(0.0, 2.0).unwrap();
        let xs: Vec<f64> = (0..1000)
            .map(|i| normal.inverse_cdf((i as f64 + 0.5) / 1000.0))
            .collect();
        assert!((ks_to_normal(&xs, 4.0) - 0.0005).abs() < 1e-9);
        assert!(ks_to_normal(&xs, 1.0) > 0.1);
    }

    #[test]
    fn stderr_edges() {
        assert_eq!(binomial_stderr(0.0, 100), 0.0);
        assert_eq!(binomial_stderr(0.5, 100), 0.05);
    }
}
