use serde::{Deserialize, Serialize};

use super::{km_fit, nelson_aalen_censoring, CensoredSample, SurvivalFunction, Target};
use crate::num::{abs, CompensatedSum};
use crate::{Error, Result};

/// Largest absolute discrepancy found for each discrete identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// `max_u |Y(u)/n - G_hat(u-) S_hat(u-)|`
    pub at_risk_product: f64,
    /// `max_u |1/G_hat(u) - 1 - sum_{s<=u} dLambda_hat(s)/G_hat(s)|`
    pub inverse_telescoping: f64,
    /// `max_i |delta_i/G_hat(U_i) - (1 - [(1-delta_i)/G_hat(U_i) - sum_{s<=U_i} dLambda_hat(s)/G_hat(s)])|`
    pub censoring_martingale: f64,
    /// Points where `G_hat(u) = 0` makes the inverse identities undefined.
    pub skipped_points: usize,
}

impl IdentityReport {
    pub fn max(&self) -> f64 {
        self.at_risk_product
            .max(self.inverse_telescoping)
            .max(self.censoring_martingale)
    }
}

/// Checks the at-risk product identity and the two inverse-weight identities
/// on the plug-in curves. Refuses samples with failure/censoring ties.
pub fn identity_suite(sample: &CensoredSample) -> Result<IdentityReport> {
    if sample.has_failure_censoring_ties() {
        return Err(Error::TiePresent);
    }
    let n = sample.len() as f64;
    let s_hat = km_fit(sample, Target::Failure);
    let g_hat = km_fit(sample, Target::Censoring);
    let lambda = nelson_aalen_censoring(sample);

    let mut report = IdentityReport {
        at_risk_product: 0.0,
        inverse_telescoping: 0.0,
        censoring_martingale: 0.0,
        skipped_points: 0,
    };

    // cumulative sum_{s <= t} dLambda(s)/G(s), one entry per censoring jump
    let mut cum = CompensatedSum::default();
    let mut cumulative = alloc::vec::Vec::with_capacity(lambda.jump_times().len());
    for (t, before, after) in lambda.jumps() {
        let g = g_hat.eval(t);
        if g > 0.0 {
            cum.add((after - before) / g);
        }
        cumulative.push(cum.value());
    }
    let cum_at = |u: f64| -> f64 {
        let k = lambda.jump_times().partition_point(|&s| s <= u);
        if k == 0 {
            0.0
        } else {
            cumulative[k - 1]
        }
    };

    for e in sample.events() {
        let u = e.t;
        let lhs = e.at_risk as f64 / n;
        report.at_risk_product = report
            .at_risk_product
            .max(abs(lhs - g_hat.left_limit(u) * s_hat.left_limit(u)));

        let g = g_hat.eval(u);
        if g > 0.0 {
            let gap = abs(1.0 / g - 1.0 - cum_at(u));
            report.inverse_telescoping = report.inverse_telescoping.max(gap);
        } else {
            report.skipped_points += 1;
        }
    }

    for obs in sample.observations() {
        let g = g_hat.eval(obs.u);
        if g <= 0.0 {
            report.skipped_points += 1;
            continue;
        }
        let (d, c) = if obs.delta { (1.0, 0.0) } else { (0.0, 1.0) };
        let lhs = d / g;
        let rhs = 1.0 - (c / g - cum_at(obs.u));
        report.censoring_martingale = report.censoring_martingale.max(abs(lhs - rhs));
    }
    Ok(report)
}
