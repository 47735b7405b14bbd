use ipcw_core::ipcw::{ipcw_mean, sigma_f_oracle, VarianceResult};
use ipcw_core::scenario::{sample_scenario, ScenarioConfig};
use ipcw_core::survival::{km_fit, Target};
use serde::{Deserialize, Serialize};

use super::scenario_label;
use crate::engine::{replicate, stream_id};
use crate::error::Result;
use crate::function::parse_function;
use crate::stats::{ks_to_normal, moments};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CltSpec {
    pub scenario: ScenarioConfig,
    pub f: String,
    pub n: usize,
    pub replications: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CltReport {
    pub scenario: String,
    pub n: usize,
    pub replications: usize,
    pub excluded: usize,
    pub truth: f64,
    pub oracle: VarianceResult,
    /// Mean of `sqrt(n) (mu_hat - mu)`.
    pub mean: f64,
    /// `sd / sqrt(R)`
    pub mean_stderr: f64,
    pub variance: f64,
    /// `variance / sigma2 - 1`
    pub relative_variance_error: f64,
    /// Kolmogorov–Smirnov distance to `N(0, sigma2)`.
    pub ks_distance: f64,
}

pub fn run_clt_check(spec: &CltSpec, workers: usize) -> Result<CltReport> {
    let config = &spec.scenario;
    config.validate()?;
    let f = parse_function(&spec.f, config.tau, config.covariate_dim)?;
    let truth = config.true_mean(&f);
    let oracle = sigma_f_oracle(config, &f)?;
    let root_n = (spec.n as f64).sqrt();
    let outcomes = replicate(workers, spec.replications, |r| -> Result<Option<f64>> {
        let sample = sample_scenario(config, spec.n, stream_id(spec.n as u64, r))?;
        match ipcw_mean(&sample, &f, &km_fit(&sample, Target::Censoring)) {
            Ok(e) => Ok(Some(root_n * (e.value - truth))),
            Err(e) if e.is_numeric() => Ok(None),
            Err(e) => Err(e.into()),
        }
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let scaled: Vec<f64> = outcomes.iter().flatten().copied().collect();
    let m = moments(&scaled);
    let ks_distance = if oracle.sigma2 > 0.0 {
        ks_to_normal(&scaled, oracle.sigma2)
    } else {
        f64::NAN
    };
    Ok(CltReport {
        scenario: scenario_label(config),
        n: spec.n,
        replications: spec.replications,
        excluded: spec.replications - scaled.len(),
        truth,
        oracle,
        mean: m.mean,
        mean_stderr: m.stderr,
        variance: m.variance,
        relative_variance_error: m.variance / oracle.sigma2 - 1.0,
        ks_distance,
    })
}
