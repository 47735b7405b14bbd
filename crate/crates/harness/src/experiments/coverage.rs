use ipcw_core::bounds::{deviation_bound, BoundInputs, BoundKind, Normalization};
use ipcw_core::ipcw::{ipcw_mean, sigma_f_oracle, BoundedFunction};
use ipcw_core::scenario::{sample_scenario, ScenarioConfig};
use ipcw_core::survival::{km_fit, sup_distance, tail_estimates, TailEstimates, Target};
use serde::{Deserialize, Serialize};

use super::scenario_label;
use crate::engine::{replicate, stream_id};
use crate::error::Result;
use crate::function::parse_function;
use crate::stats::binomial_stderr;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageSpec {
    pub scenario: ScenarioConfig,
    pub kinds: Vec<BoundKind>,
    /// Selector of the function for the single-function kinds.
    pub f: String,
    /// Selectors of the finite class for the class kinds.
    pub class: Vec<String>,
    pub eta_grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub replications: usize,
    pub d_o: f64,
    #[serde(default)]
    pub corrected_chernoff: bool,
    /// Use population values in place of the per-replication estimates.
    #[serde(default)]
    pub population_constants: bool,
}

impl CoverageSpec {
    pub fn new(scenario: ScenarioConfig, n_grid: Vec<usize>, replications: usize) -> Self {
        Self {
            scenario,
            kinds: BoundKind::ALL.to_vec(),
            f: "t".into(),
            class: ["t", "indicator:0.25", "indicator:0.5", "indicator:0.75"]
                .map(String::from)
                .to_vec(),
            eta_grid: vec![1.0, 2.0, 3.0, 4.0],
            n_grid,
            replications,
            d_o: 1.0,
            corrected_chernoff: false,
            population_constants: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub kind: BoundKind,
    pub normalization: Normalization,
    pub n: usize,
    pub replications: usize,
    /// Replications dropped for this kind (numeric failures).
    pub excluded: usize,
    pub eta_grid: Vec<f64>,
    pub exceedance_freq: Vec<f64>,
    pub prob_bound: Vec<f64>,
    pub mc_stderr: Vec<f64>,
    pub vacuous: Vec<bool>,
    pub mean_threshold: Vec<f64>,
    /// `vacuous || exceedance_freq <= prob_bound + 3 mc_stderr`
    pub pass: Vec<bool>,
}

impl CoverageReport {
    pub fn all_pass(&self) -> bool {
        self.pass.iter().all(|&p| p)
    }

    pub fn exclusion_rate(&self) -> f64 {
        self.excluded as f64 / self.replications as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRun {
    pub scenario: String,
    pub truth: f64,
    pub class_truth: Vec<f64>,
    pub sigma2: f64,
    pub corrected_chernoff: bool,
    pub population_constants: bool,
    /// Replications where the estimator itself failed.
    pub excluded_replications: usize,
    pub reports: Vec<CoverageReport>,
}

impl CoverageRun {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(CoverageReport::all_pass)
    }

    pub fn max_exclusion_rate(&self) -> f64 {
        self.reports
            .iter()
            .map(CoverageReport::exclusion_rate)
            .fold(0.0, f64::max)
    }
}

/// Statistics of one replication.
struct Draw {
    deviation: f64,
    class_deviation: f64,
    g_sup: f64,
    tails: TailEstimates,
}

fn one_replication(
    spec: &CoverageSpec,
    f: &BoundedFunction,
    class: &[BoundedFunction],
    truth: f64,
    class_truth: &[f64],
    n: usize,
    r: u64,
) -> Result<Option<Draw>> {
    let config = &spec.scenario;
    let sample = sample_scenario(config, n, stream_id(n as u64, r))?;
    let g_hat = km_fit(&sample, Target::Censoring);
    let estimate = |f: &BoundedFunction| match ipcw_mean(&sample, f, &g_hat) {
        Ok(e) => Ok(Some(e.value)),
        Err(e) if e.is_numeric() => Ok(None),
        Err(e) => Err(e),
    };
    let Some(mu_hat) = estimate(f)? else {
        return Ok(None);
    };
    let mut class_deviation: f64 = 0.0;
    for (g, mu) in class.iter().zip(class_truth) {
        let Some(v) = estimate(g)? else {
            return Ok(None);
        };
        class_deviation = class_deviation.max((v - mu).abs());
    }
    Ok(Some(Draw {
        deviation: (mu_hat - truth).abs(),
        class_deviation,
        g_sup: sup_distance(&g_hat, &config.true_censoring_curve(), config.tau),
        tails: tail_estimates(&sample),
    }))
}

/// Frequencies of `{statistic >= threshold}` for every kind and `eta`,
/// one [`CoverageReport`] per kind and sample size.
pub fn run_coverage(spec: &CoverageSpec, workers: usize) -> Result<CoverageRun> {
    let config = &spec.scenario;
    config.validate()?;
    let f = parse_function(&spec.f, config.tau, config.covariate_dim)?;
    let class: Vec<BoundedFunction> = spec
        .class
        .iter()
        .map(|s| parse_function(s, config.tau, config.covariate_dim))
        .collect::<Result<_>>()?;
    let truth = config.true_mean(&f);
    let class_truth: Vec<f64> = class.iter().map(|g| config.true_mean(g)).collect();
    let sigma2 = sigma_f_oracle(config, &f)?.sigma2;
    let class_m = class
        .iter()
        .map(BoundedFunction::bound_m)
        .fold(0.0, f64::max);
    let population = TailEstimates {
        s_hat_tau: config.s_tau(),
        g_hat_tau: config.g_tau(),
        h_hat_tau: config.h_tau(),
    };

    let mut reports = Vec::new();
    let mut excluded_replications = 0;
    for &n in &spec.n_grid {
        let draws = replicate(workers, spec.replications, |r| {
            one_replication(spec, &f, &class, truth, &class_truth, n, r)
        })?
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        excluded_replications += draws.iter().filter(|d| d.is_none()).count();

        for &kind in &spec.kinds {
            let normalization = kind.normalization();
            let m = if normalization == Normalization::ClassSupDeviation {
                class_m
            } else {
                f.bound_m()
            };
            let mut hits = vec![0usize; spec.eta_grid.len()];
            let mut threshold_sum = vec![0.0; spec.eta_grid.len()];
            let mut prob_bound = vec![f64::NAN; spec.eta_grid.len()];
            let mut used = 0usize;
            for draw in draws.iter().flatten() {
                let tails = if spec.population_constants {
                    population
                } else {
                    draw.tails
                };
                let statistic = match normalization {
                    Normalization::Deviation => draw.deviation,
                    Normalization::ClassSupDeviation => draw.class_deviation,
                    Normalization::KmSupNorm => draw.g_sup,
                };
                let mut results = Vec::with_capacity(spec.eta_grid.len());
                for &eta in &spec.eta_grid {
                    let inputs = BoundInputs {
                        n,
                        eta,
                        m: Some(m),
                        d_o: spec.d_o,
                        h_tau: Some(config.h_tau()),
                        s_tau: Some(config.s_tau()),
                        h_hat_tau: Some(tails.h_hat_tau),
                        g_hat_tau: Some(tails.g_hat_tau),
                        s_hat_tau: Some(tails.s_hat_tau),
                        sigma2: Some(sigma2),
                        class_size: Some(class.len()),
                        corrected_chernoff: spec.corrected_chernoff,
                    };
                    match deviation_bound(kind, &inputs) {
                        Ok(b) => results.push(b),
                        Err(e) if e.is_numeric() => break,
                        Err(e) => return Err(e.into()),
                    }
                }
                if results.len() < spec.eta_grid.len() {
                    continue;
                }
                used += 1;
                for (k, b) in results.iter().enumerate() {
                    threshold_sum[k] += b.deviation_threshold;
                    prob_bound[k] = b.prob_bound;
                    if statistic >= b.deviation_threshold {
                        hits[k] += 1;
                    }
                }
            }
            let exceedance_freq: Vec<f64> = hits
                .iter()
                .map(|&h| h as f64 / used.max(1) as f64)
                .collect();
            let mc_stderr: Vec<f64> = exceedance_freq
                .iter()
                .map(|&p| binomial_stderr(p, used))
                .collect();
            let vacuous: Vec<bool> = prob_bound.iter().map(|&p| p >= 1.0).collect();
            let pass = (0..spec.eta_grid.len())
                .map(|k| {
                    used > 0
                        && (vacuous[k] || exceedance_freq[k] <= prob_bound[k] + 3.0 * mc_stderr[k])
                })
                .collect();
            reports.push(CoverageReport {
                kind,
                normalization,
                n,
                replications: spec.replications,
                excluded: spec.replications - used,
                eta_grid: spec.eta_grid.clone(),
                exceedance_freq,
                prob_bound,
                mc_stderr,
                vacuous,
                mean_threshold: threshold_sum
                    .iter()
                    .map(|s| s / used.max(1) as f64)
                    .collect(),
                pass,
            });
        }
    }
    Ok(CoverageRun {
        scenario: scenario_label(config),
        truth,
        class_truth,
        sigma2,
        corrected_chernoff: spec.corrected_chernoff,
        population_constants: spec.population_constants,
        excluded_replications,
        reports,
    })
}
