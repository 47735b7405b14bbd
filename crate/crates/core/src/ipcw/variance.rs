use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{ipcw_weights, BoundedFunction, IpcwOptions};
use crate::num::gl4;
use crate::scenario::{CovariateDesign, ScenarioConfig, TimePanels};
use crate::survival::{km_fit, nelson_aalen_censoring, CensoredSample, SurvivalFunction, Target};
use crate::{Error, Result};

/// Asymptotic variance `sigma_f^2 = Var f(T,Z) + censoring correction`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceResult {
    pub sigma2: f64,
    pub term_variance: f64,
    pub term_censoring: f64,
}

impl VarianceResult {
    fn new(term_variance: f64, term_censoring: f64) -> Self {
        Self {
            sigma2: term_variance + term_censoring,
            term_variance,
            term_censoring,
        }
    }
}

/// Which integrand enters the censoring correction
/// `E int_0^tau (g - h(s))^2 1{T >= s} dLambda^C(s) / G(s)`,
/// with `h(s) = E[f(T,Z) 1{T >= s}] / S(s-)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaForm {
    /// `g = f(T, Z)`: the variance of the estimator's influence function.
    #[default]
    IpcwInfluence,
    /// `g = f(s, Z)`: the integrand evaluated at the integration variable.
    AsPrinted,
}

pub fn sigma_f_oracle(config: &ScenarioConfig, f: &BoundedFunction) -> Result<VarianceResult> {
    sigma_f_oracle_with(config, f, SigmaForm::default())
}

/// Deterministic quadrature: composite Gauss–Legendre over the law of `T`
/// (atoms handled exactly) and over the censoring hazard, a tensor rule over
/// `Z`. `T` and `Z` are independent in every supported scenario.
pub fn sigma_f_oracle_with(
    config: &ScenarioConfig,
    f: &BoundedFunction,
    form: SigmaForm,
) -> Result<VarianceResult> {
    config.validate()?;
    if f.depends_on_z() && config.covariate_dim == 0 {
        return Err(Error::UnsupportedScenario(
            "function uses covariates but the scenario has none".into(),
        ));
    }
    let panels = TimePanels::new(config, f.breakpoints());
    let design = CovariateDesign::new(config, f.depends_on_z());
    let q = |t: f64| design.expect(|z| f.eval(t, z));
    let r = |t: f64| design.expect(|z| f.eval(t, z) * f.eval(t, z));

    let mu = panels.expect(config, q);
    let term_variance = panels.expect(config, |t| {
        design.expect(|z| (f.eval(t, z) - mu) * (f.eval(t, z) - mu))
    });

    if config.censoring_model.is_none() {
        return Ok(VarianceResult::new(term_variance, 0.0));
    }

    let density = |t: f64| config.failure_model.density(t);
    let spans: Vec<(f64, f64)> = panels.panels().collect();
    let panel_q: Vec<f64> = spans
        .iter()
        .map(|&(a, b)| gl4(a, b, |t| q(t) * density(t)))
        .collect();
    let panel_r: Vec<f64> = spans
        .iter()
        .map(|&(a, b)| gl4(a, b, |t| r(t) * density(t)))
        .collect();
    let mut suffix_q = alloc::vec![0.0; spans.len() + 1];
    let mut suffix_r = alloc::vec![0.0; spans.len() + 1];
    for k in (0..spans.len()).rev() {
        suffix_q[k] = suffix_q[k + 1] + panel_q[k];
        suffix_r[k] = suffix_r[k + 1] + panel_r[k];
    }
    let atom_terms: Vec<(f64, f64, f64)> = panels
        .atoms
        .iter()
        .map(|&(a, m)| (a, q(a) * m, r(a) * m))
        .collect();

    let censoring = &config.censoring_model;
    let mut term_censoring = 0.0;
    for (k, &(a, b)) in spans.iter().enumerate() {
        term_censoring += gl4(a, b, |s| {
            // tails over [s, tau]
            let mut tail_q = gl4(s, b, |t| q(t) * density(t)) + suffix_q[k + 1];
            let mut tail_r = gl4(s, b, |t| r(t) * density(t)) + suffix_r[k + 1];
            for &(at, mq, mr) in &atom_terms {
                if at >= s {
                    tail_q += mq;
                    tail_r += mr;
                }
            }
            let s_left = config.failure_survival_left(s);
            if s_left <= 0.0 {
                return 0.0;
            }
            let inner = match form {
                SigmaForm::IpcwInfluence => (tail_r - tail_q * tail_q / s_left).max(0.0),
                SigmaForm::AsPrinted => {
                    let h = tail_q / s_left;
                    s_left * design.expect(|z| (f.eval(s, z) - h) * (f.eval(s, z) - h))
                }
            };
            inner * censoring.hazard(s) / censoring.survival(s)
        });
    }
    Ok(VarianceResult::new(term_variance, term_censoring))
}

pub fn sigma_f_plugin(sample: &CensoredSample, f: &BoundedFunction) -> Result<VarianceResult> {
    sigma_f_plugin_with(sample, f, SigmaForm::default())
}

/// Plug-in estimate of `sigma_f^2`: `S`, `G`, `Lambda^C` replaced by their
/// product-limit/Nelson–Aalen estimates, inner means and outer expectation
/// replaced by IPCW-weighted sums.
pub fn sigma_f_plugin_with(
    sample: &CensoredSample,
    f: &BoundedFunction,
    form: SigmaForm,
) -> Result<VarianceResult> {
    let g_hat = km_fit(sample, Target::Censoring);
    let s_hat = km_fit(sample, Target::Failure);
    let w = ipcw_weights(sample, &g_hat, &IpcwOptions::default())?;

    // uncensored terms (u, weight, f value, index) in time order
    let mut terms: Vec<(f64, f64, f64, usize)> = Vec::with_capacity(w.n_effective);
    for (i, (obs, &wi)) in sample.observations().iter().zip(&w.weights).enumerate() {
        if obs.delta {
            terms.push((obs.u, wi, f.eval_checked(obs.u, &obs.z)?, i));
        }
    }
    terms.sort_by(|a, b| a.0.total_cmp(&b.0));

    let total_w: f64 = terms.iter().map(|t| t.1).sum();
    let mean: f64 = terms.iter().map(|t| t.1 * t.2).sum();
    let spread: f64 = terms
        .iter()
        .map(|t| t.1 * (t.2 - mean) * (t.2 - mean))
        .sum();
    let term_variance = spread + mean * mean * (1.0 - total_w).max(0.0);

    let lambda = nelson_aalen_censoring(sample);
    let mut term_censoring = 0.0;
    for (s, before, after) in lambda.jumps() {
        let first = terms.partition_point(|t| t.0 < s);
        let tail = &terms[first..];
        if tail.is_empty() {
            continue;
        }
        let g = g_hat.eval(s);
        if g <= 0.0 {
            return Err(Error::ZeroDenominator { index: tail[0].3 });
        }
        let s_left = s_hat.left_limit(s);
        let h = tail.iter().map(|t| t.1 * t.2).sum::<f64>() / s_left;
        let inner: f64 = match form {
            SigmaForm::IpcwInfluence => tail.iter().map(|t| t.1 * (t.2 - h) * (t.2 - h)).sum(),
            SigmaForm::AsPrinted => tail
                .iter()
                .map(|t| {
                    let v = f.eval(s, &sample.observations()[t.3].z);
                    t.1 * (v - h) * (v - h)
                })
                .sum(),
        };
        term_censoring += inner * (after - before) / g;
    }
    Ok(VarianceResult::new(term_variance, term_censoring))
}
