//! Resolved experiment configurations and the JSON report envelope.

use std::path::PathBuf;

use ipcw_core::bounds::{deviation_bound, invert_confidence, BoundInputs, BoundKind, BoundResult};
use ipcw_core::ipcw::{
    ipcw_mean, km_functional_mean, naive_mean, sigma_f_plugin, EstimateResult, VarianceResult,
};
use ipcw_core::survival::{
    identity_suite, km_fit, tail_estimates, IdentityReport, TailEstimates, Target,
};
use serde::{Deserialize, Serialize};

use crate::data::read_sample;
use crate::error::Result;
use crate::experiments::{
    calibrate_d_o, run_bias_demo, run_clt_check, run_coverage, run_erm_consistency, BiasSpec,
    CltSpec, CoverageSpec, DoSpec, ErmSpec,
};
use crate::function::parse_function;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateSpec {
    pub input: PathBuf,
    pub tau: f64,
    pub f: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitiesSpec {
    pub input: PathBuf,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSpec {
    pub kinds: Vec<BoundKind>,
    pub inputs: BoundInputs,
    /// When set, `eta` is solved from this confidence level per kind.
    #[serde(default)]
    pub delta: Option<f64>,
}

/// Everything needed to reproduce a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "spec", rename_all = "kebab-case")]
pub enum ExperimentSpec {
    Estimate(EstimateSpec),
    Identities(IdentitiesSpec),
    Bound(BoundSpec),
    Coverage(CoverageSpec),
    Clt(CltSpec),
    Bias(BiasSpec),
    CalibrateDo(DoSpec),
    Erm(ErmSpec),
}

impl ExperimentSpec {
    /// Scenario seeds involved, for the report header.
    pub fn seeds(&self) -> Vec<u64> {
        match self {
            Self::Coverage(s) => vec![s.scenario.seed],
            Self::Clt(s) => vec![s.scenario.seed],
            Self::Bias(s) => vec![s.scenario.seed],
            Self::CalibrateDo(s) => s.scenarios.iter().map(|c| c.seed).collect(),
            Self::Erm(s) => vec![s.scenario.seed],
            Self::Estimate(_) | Self::Identities(_) | Self::Bound(_) => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub artifact_version: String,
    pub config: ExperimentSpec,
    pub seeds: Vec<u64>,
    pub excluded_replications: usize,
    pub result: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateSummary {
    pub n: usize,
    pub failures: usize,
    pub estimate: EstimateResult,
    /// Kaplan–Meier functional; absent when `f` depends on covariates.
    pub km_functional: Option<f64>,
    pub naive: Option<f64>,
    pub tails: TailEstimates,
    pub sigma2_plugin: Option<VarianceResult>,
    /// Absent when the sample has failure/censoring ties.
    pub identities: Option<IdentityReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub eta: f64,
    #[serde(flatten)]
    pub result: BoundResult,
}

fn to_value<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("reports serialize")
}

/// Executes a resolved configuration. `workers` only affects speed.
pub fn run_spec(spec: &ExperimentSpec, workers: usize) -> Result<Report> {
    let (result, excluded) = match spec {
        ExperimentSpec::Estimate(s) => {
            let sample = read_sample(&s.input, s.tau)?;
            let f = parse_function(&s.f, s.tau, sample.dim())?;
            let estimate = ipcw_mean(&sample, &f, &km_fit(&sample, Target::Censoring))?;
            let summary = EstimateSummary {
                n: sample.len(),
                failures: sample.failures(),
                estimate,
                km_functional: km_functional_mean(&sample, &f).ok(),
                naive: naive_mean(&sample, &f).ok(),
                tails: tail_estimates(&sample),
                sigma2_plugin: sigma_f_plugin(&sample, &f).ok(),
                identities: identity_suite(&sample).ok(),
            };
            (to_value(&summary), 0)
        }
        ExperimentSpec::Identities(s) => {
            let sample = read_sample(&s.input, s.tau)?;
            (to_value(&identity_suite(&sample)?), 0)
        }
        ExperimentSpec::Bound(s) => {
            let mut entries = Vec::new();
            for &kind in &s.kinds {
                let eta = match s.delta {
                    Some(delta) => invert_confidence(kind, delta, &s.inputs)?,
                    None => s.inputs.eta,
                };
                let result = deviation_bound(kind, &BoundInputs { eta, ..s.inputs })?;
                entries.push(BoundEntry { eta, result });
            }
            (to_value(&entries), 0)
        }
        ExperimentSpec::Coverage(s) => {
            let run = run_coverage(s, workers)?;
            (to_value(&run), run.excluded_replications)
        }
        ExperimentSpec::Clt(s) => {
            let r = run_clt_check(s, workers)?;
            (to_value(&r), r.excluded)
        }
        ExperimentSpec::Bias(s) => {
            let r = run_bias_demo(s, workers)?;
            (to_value(&r), r.excluded)
        }
        ExperimentSpec::CalibrateDo(s) => (to_value(&calibrate_d_o(s, workers)?), 0),
        ExperimentSpec::Erm(s) => {
            let r = run_erm_consistency(s, workers)?;
            let excluded = r.cells.iter().map(|c| c.excluded).sum();
            (to_value(&r), excluded)
        }
    };
    Ok(Report {
        artifact_version: ARTIFACT_VERSION.to_string(),
        config: spec.clone(),
        seeds: spec.seeds(),
        excluded_replications: excluded,
        result,
    })
}
