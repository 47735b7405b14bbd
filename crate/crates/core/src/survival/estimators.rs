use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{CensoredSample, StepCurve, SurvivalFunction, Target};

/// Product-limit (Kaplan–Meier) curve of the failure (`S`) or censoring (`G`)
/// survival function.
///
/// At each distinct time with `e` events of the target kind and `Y(t)` at risk
/// the running value is multiplied by `1 - e / Y(t)`. The risk set is
/// `Y(t) = #{u >= t}` for both targets, so when a failure and a censoring
/// share a time the censoring curve still counts that failure as at risk.
pub fn km_fit(sample: &CensoredSample, target: Target) -> StepCurve {
    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut s = 1.0;
    for e in sample.events() {
        let d = match target {
            Target::Failure => e.failures,
            Target::Censoring => e.censorings,
        };
        if d > 0 {
            s *= 1.0 - d as f64 / e.at_risk as f64;
            times.push(e.t);
            values.push(s);
        }
    }
    StepCurve::new(1.0, times, values)
}

/// Nelson–Aalen cumulative hazard of censoring, with increments
/// `#censorings(t) / Y(t)`.
pub fn nelson_aalen_censoring(sample: &CensoredSample) -> StepCurve {
    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut cum = 0.0;
    for e in sample.events().iter().filter(|e| e.censorings > 0) {
        cum += e.censorings as f64 / e.at_risk as f64;
        times.push(e.t);
        values.push(cum);
    }
    StepCurve::new(0.0, times, values)
}

/// `Y(t) = #{i : u_i >= t}`.
pub fn at_risk(sample: &CensoredSample, t: f64) -> usize {
    let u = sample.sorted_times();
    u.len() - u.partition_point(|&x| x < t)
}

/// Empirical tail constants at the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimates {
    /// `S_hat(tau-)`
    pub s_hat_tau: f64,
    /// `G_hat(tau-)`
    pub g_hat_tau: f64,
    /// `n^-1 #{u_i >= tau}`
    pub h_hat_tau: f64,
}

pub fn tail_estimates(sample: &CensoredSample) -> TailEstimates {
    let tau = sample.tau();
    TailEstimates {
        s_hat_tau: km_fit(sample, Target::Failure).left_limit(tau),
        g_hat_tau: km_fit(sample, Target::Censoring).left_limit(tau),
        h_hat_tau: at_risk(sample, tau) as f64 / sample.len() as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::survival::fixtures::sample_a;

    #[test]
    fn sample_a_failure_curve() {
        let s = km_fit(&sample_a(), Target::Failure);
        assert_eq!(s.jump_times(), &[1.0, 3.0, 4.0]);
        assert_eq!(s.values(), &[0.75, 0.375, 0.0]);
        assert_eq!(s.eval(0.5), 1.0);
        assert_eq!(s.eval(2.0), 0.75);
        assert_eq!(s.eval(3.5), 0.375);
        assert_eq!(s.eval(10.0), 0.0);
    }

    #[test]
    fn sample_a_censoring_curve() {
        let g = km_fit(&sample_a(), Target::Censoring);
        assert_eq!(g.jump_times(), &[2.0]);
        assert_eq!(g.eval(1.99), 1.0);
        assert!((g.eval(2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(g.eval(100.0), g.eval(2.0));
    }

    #[test]
    fn nelson_aalen_sample_a_and_product_relation() {
        let a = sample_a();
        let na = nelson_aalen_censoring(&a);
        assert_eq!(na.jump_times(), &[2.0]);
        assert_eq!(na.values(), &[1.0 / 3.0]);
        let g = km_fit(&a, Target::Censoring);
        assert_eq!(g.eval(2.0), 1.0 * (1.0 - 1.0 / 3.0));
    }

    #[test]
    fn nelson_aalen_without_censoring_is_zero() {
        let s = CensoredSample::from_pairs(&[(0.2, true), (0.4, true)], 1.0).unwrap();
        let na = nelson_aalen_censoring(&s);
        assert!(na.jump_times().is_empty());
        assert_eq!(na.eval(0.9), 0.0);
    }

    #[test]
    fn at_risk_counts() {
        let a = sample_a();
        assert_eq!(at_risk(&a, 3.0), 2);
        assert_eq!(at_risk(&a, 0.0), 4);
        assert_eq!(at_risk(&a, 4.5), 0);
    }

    #[test]
    fn tails_of_sample_a() {
        let t = tail_estimates(&sample_a());
        assert_eq!(t.s_hat_tau, 0.375);
        assert!((t.g_hat_tau - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(t.h_hat_tau, 0.25);
        assert!((t.h_hat_tau - t.s_hat_tau * t.g_hat_tau).abs() < 1e-15);
    }

    #[test]
    fn uncensored_tails() {
        let s = CensoredSample::from_pairs(&[(0.1, true), (0.5, true), (0.7, true)], 1.0).unwrap();
        let t = tail_estimates(&s);
        assert_eq!(t.s_hat_tau, 0.0);
        assert_eq!(t.g_hat_tau, 1.0);
        assert_eq!(t.h_hat_tau, 0.0);
    }

    #[test]
    fn uncensored_km_is_empirical_survival() {
        let times = [0.3, 0.1, 0.7, 0.3, 0.9, 0.5];
        let s =
            CensoredSample::from_pairs(&times.iter().map(|&t| (t, true)).collect::<Vec<_>>(), 1.0)
                .unwrap();
        let km = km_fit(&s, Target::Failure);
        for t in [0.0, 0.1, 0.2, 0.3, 0.31, 0.5, 0.8, 0.9, 1.0] {
            let emp = times.iter().filter(|&&x| x > t).count() as f64 / times.len() as f64;
            assert!((km.eval(t) - emp).abs() < 1e-15, "t = {t}");
        }
    }
}
