use ipcw_core::ipcw::{ipcw_mean, naive_mean};
use ipcw_core::scenario::{sample_scenario, ScenarioConfig};
use ipcw_core::survival::{km_fit, Target};
use serde::{Deserialize, Serialize};

use super::scenario_label;
use crate::engine::{replicate, stream_id};
use crate::error::Result;
use crate::function::parse_function;
use crate::stats::{moments, Moments};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiasSpec {
    pub scenario: ScenarioConfig,
    pub f: String,
    pub n: usize,
    pub replications: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasReport {
    pub scenario: String,
    pub n: usize,
    pub replications: usize,
    pub excluded: usize,
    pub truth: f64,
    /// Moments of `naive - mu`.
    pub naive: Moments,
    /// Moments of `ipcw - mu`.
    pub ipcw: Moments,
}

impl BiasReport {
    /// `|mean error| <= 3 stderr`
    pub fn unbiased_within_3se(m: &Moments) -> bool {
        m.mean.abs() <= 3.0 * m.stderr
    }
}

/// Compares the naive mean over uncensored observations with the IPCW
/// estimator on the same samples.
pub fn run_bias_demo(spec: &BiasSpec, workers: usize) -> Result<BiasReport> {
    let config = &spec.scenario;
    config.validate()?;
    let f = parse_function(&spec.f, config.tau, config.covariate_dim)?;
    let truth = config.true_mean(&f);
    let outcomes = replicate(
        workers,
        spec.replications,
        |r| -> Result<Option<(f64, f64)>> {
            let sample = sample_scenario(config, spec.n, stream_id(spec.n as u64, r))?;
            let naive = naive_mean(&sample, &f);
            let ipcw = ipcw_mean(&sample, &f, &km_fit(&sample, Target::Censoring));
            match (naive, ipcw) {
                (Ok(a), Ok(b)) => Ok(Some((a - truth, b.value - truth))),
                (Err(e), _) | (_, Err(e)) if e.is_numeric() => Ok(None),
                (Err(e), _) | (_, Err(e)) => Err(e.into()),
            }
        },
    )?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let kept: Vec<(f64, f64)> = outcomes.into_iter().flatten().collect();
    let naive: Vec<f64> = kept.iter().map(|p| p.0).collect();
    let ipcw: Vec<f64> = kept.iter().map(|p| p.1).collect();
    Ok(BiasReport {
        scenario: scenario_label(config),
        n: spec.n,
        replications: spec.replications,
        excluded: spec.replications - kept.len(),
        truth,
        naive: moments(&naive),
        ipcw: moments(&ipcw),
    })
}
