use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::BoundedFunction;
use crate::survival::{km_fit, CensoredSample, SurvivalFunction, Target};
use crate::{Error, Result};

/// Zero-denominator policy. Without a floor, `G(u-) = 0` on an uncensored
/// point is an error.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct IpcwOptions {
    pub denominator_floor: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub value: f64,
    /// Number of `delta = 1` terms.
    pub n_effective: usize,
    /// Smallest `G(u_i-)` over the uncensored terms (1 when there are none).
    pub min_weight_denominator: f64,
}

/// Per-observation IPCW weights `delta_i / (n G(u_i-))`.
#[derive(Debug, Clone, PartialEq)]
pub struct IpcwWeights {
    pub weights: Vec<f64>,
    pub n_effective: usize,
    pub min_weight_denominator: f64,
}

impl IpcwWeights {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

fn denominator(g: &impl SurvivalFunction, u: f64, index: usize, opts: &IpcwOptions) -> Result<f64> {
    let d = g.left_limit(u);
    match opts.denominator_floor {
        Some(floor) if d < floor => Ok(floor),
        _ if d > 0.0 => Ok(d),
        _ => Err(Error::ZeroDenominator { index }),
    }
}

pub fn ipcw_weights(
    sample: &CensoredSample,
    g: &impl SurvivalFunction,
    opts: &IpcwOptions,
) -> Result<IpcwWeights> {
    let n = sample.len() as f64;
    let mut weights = Vec::with_capacity(sample.len());
    let mut n_effective = 0;
    let mut min_den: f64 = 1.0;
    for (i, obs) in sample.observations().iter().enumerate() {
        if obs.delta {
            let d = denominator(g, obs.u, i, opts)?;
            min_den = min_den.min(d);
            n_effective += 1;
            weights.push(1.0 / (n * d));
        } else {
            weights.push(0.0);
        }
    }
    Ok(IpcwWeights {
        weights,
        n_effective,
        min_weight_denominator: min_den,
    })
}

/// `n^-1 sum_i delta_i f(T_i, Z_i) / G(T_i-)` with the default policy.
pub fn ipcw_mean(
    sample: &CensoredSample,
    f: &BoundedFunction,
    g: &impl SurvivalFunction,
) -> Result<EstimateResult> {
    ipcw_mean_with(sample, f, g, &IpcwOptions::default())
}

pub fn ipcw_mean_with(
    sample: &CensoredSample,
    f: &BoundedFunction,
    g: &impl SurvivalFunction,
    opts: &IpcwOptions,
) -> Result<EstimateResult> {
    let mut sum = 0.0;
    let mut n_effective = 0;
    let mut min_den: f64 = 1.0;
    for (i, obs) in sample.observations().iter().enumerate() {
        if !obs.delta {
            continue;
        }
        let d = denominator(g, obs.u, i, opts)?;
        sum += f.eval_checked(obs.u, &obs.z)? / d;
        min_den = min_den.min(d);
        n_effective += 1;
    }
    Ok(EstimateResult {
        value: sum / sample.len() as f64,
        n_effective,
        min_weight_denominator: min_den,
    })
}

/// `int_0^tau f dF_hat` with `F_hat = 1 - S_hat`, summed over the jumps of the
/// Kaplan–Meier failure curve.
pub fn km_functional_mean(sample: &CensoredSample, f: &BoundedFunction) -> Result<f64> {
    if f.depends_on_z() {
        return Err(Error::DependsOnCovariates);
    }
    let z = alloc::vec![0.0; sample.dim()];
    let s_hat = km_fit(sample, Target::Failure);
    let mut total = 0.0;
    for (t, before, after) in s_hat.jumps() {
        total += f.eval_checked(t, &z)? * (before - after);
    }
    Ok(total)
}

/// Unweighted mean over uncensored observations; biased under censoring.
pub fn naive_mean(sample: &CensoredSample, f: &BoundedFunction) -> Result<f64> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for obs in sample.observations().iter().filter(|o| o.delta) {
        sum += f.eval_checked(obs.u, &obs.z)?;
        count += 1;
    }
    if count == 0 {
        return Err(Error::NoFailures);
    }
    Ok(sum / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::survival::fixtures::sample_a;
    use crate::survival::StepCurve;
    use alloc::vec;

    fn g_of(s: &CensoredSample) -> StepCurve {
        km_fit(s, Target::Censoring)
    }

    #[test]
    fn sample_a_values() {
        let a = sample_a();
        let f = BoundedFunction::time(4.0);
        let est = ipcw_mean(&a, &f, &g_of(&a)).unwrap();
        assert!((est.value - 2.875).abs() < 1e-15);
        assert_eq!(est.n_effective, 3);
        assert!((est.min_weight_denominator - 2.0 / 3.0).abs() < 1e-15);
        assert!((km_functional_mean(&a, &f).unwrap() - 2.875).abs() < 1e-15);
        assert!((naive_mean(&a, &f).unwrap() - 8.0 / 3.0).abs() < 1e-15);
        let one = km_functional_mean(&a, &BoundedFunction::constant(1.0)).unwrap();
        assert_eq!(one, 1.0 - km_fit(&a, Target::Failure).eval(4.0));
    }

    #[test]
    fn uncensored_reduces_to_sample_mean() {
        let times = [0.1, 0.4, 0.45, 0.9, 0.2];
        let s = CensoredSample::from_pairs(&times.map(|t| (t, true)), 1.0).unwrap();
        let f = BoundedFunction::polynomial(vec![0.5, 1.0, -1.0], 1.0);
        let mean = times.iter().map(|&t| f.eval(t, &[])).sum::<f64>() / 5.0;
        assert_eq!(ipcw_mean(&s, &f, &g_of(&s)).unwrap().value, mean);
        assert_eq!(naive_mean(&s, &f).unwrap(), mean);
        assert!((km_functional_mean(&s, &f).unwrap() - mean).abs() < 1e-15);
        assert_eq!(
            ipcw_mean(&s, &BoundedFunction::constant(2.5), &g_of(&s))
                .unwrap()
                .value,
            2.5
        );
    }

    #[test]
    fn zero_denominator_policy() {
        // failure at 0.5 sits behind a censoring that empties nothing, but a
        // supplied oracle curve can be zero
        let s = CensoredSample::from_pairs(&[(0.2, false), (0.5, true)], 1.0).unwrap();
        let zero = StepCurve::new(1.0, vec![0.3], vec![0.0]);
        let f = BoundedFunction::time(1.0);
        assert_eq!(
            ipcw_mean(&s, &f, &zero).unwrap_err(),
            Error::ZeroDenominator { index: 1 }
        );
        let opts = IpcwOptions {
            denominator_floor: Some(0.25),
        };
        let est = ipcw_mean_with(&s, &f, &zero, &opts).unwrap();
        assert_eq!(est.value, 0.5 / 0.25 / 2.0);
        assert!(ipcw_weights(&s, &zero, &IpcwOptions::default()).is_err());
    }

    #[test]
    fn errors() {
        let s = CensoredSample::from_pairs(&[(0.2, false), (0.5, false)], 1.0).unwrap();
        assert_eq!(
            naive_mean(&s, &BoundedFunction::time(1.0)).unwrap_err(),
            Error::NoFailures
        );
        assert_eq!(
            km_functional_mean(&s, &BoundedFunction::time_times_covariate(0, 1.0)).unwrap_err(),
            Error::DependsOnCovariates
        );
        let tight = BoundedFunction::new(0.1, false, |t, _| t).unwrap();
        let a = sample_a();
        assert!(matches!(
            ipcw_mean(&a, &tight, &g_of(&a)),
            Err(Error::BoundViolation { .. })
        ));
    }

    #[test]
    fn weights_reproduce_mean() {
        let a = sample_a();
        let w = ipcw_weights(&a, &g_of(&a), &IpcwOptions::default()).unwrap();
        let v: f64 = a
            .observations()
            .iter()
            .zip(&w.weights)
            .map(|(o, w)| w * o.u)
            .sum();
        assert!((v - 2.875).abs() < 1e-15);
        // total weight is the Kaplan-Meier failure mass
        assert!((w.total() - 1.0).abs() < 1e-15);
    }
}
