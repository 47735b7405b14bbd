use ipcw_core::scenario::{sample_scenario, ScenarioConfig};
use ipcw_core::survival::{km_fit, sup_distance, Target};
use serde::{Deserialize, Serialize};

use super::scenario_label;
use crate::engine::{replicate, stream_id};
use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoSpec {
    pub scenarios: Vec<ScenarioConfig>,
    pub eta_grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub replications: usize,
    /// Bisection stops once the bracket is narrower than this.
    pub tolerance: f64,
    /// Lower end of the search bracket; values below 0 probe how much
    /// slack the grid leaves.
    #[serde(default)]
    pub lower: f64,
    /// Upper end of the search bracket.
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationCell {
    pub n: usize,
    pub eta: f64,
    /// Event frequency at the calibrated `D_o`.
    pub frequency: f64,
    /// `(5/2) e^{-eta}`
    pub prob_bound: f64,
    /// Infimum of the `D_o` values feasible for this cell alone, from the
    /// order statistics of the normalized sup distance (may be negative).
    pub required_d_o: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioCalibration {
    pub scenario: String,
    /// Smallest feasible `D_o` to within the tolerance; `None` if even
    /// `upper` is infeasible.
    pub minimal_d_o: Option<f64>,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub cells: Vec<CalibrationCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoReport {
    pub scenarios: Vec<ScenarioCalibration>,
    /// Maximum of the per-scenario values.
    pub recommended_d_o: Option<f64>,
    pub tolerance: f64,
}

/// `W = sqrt(n) S_tau ||G_hat - G||` per replication, by sample size.
fn normalized_sups(
    config: &ScenarioConfig,
    n_grid: &[usize],
    replications: usize,
    workers: usize,
) -> Result<Vec<Vec<f64>>> {
    let s_tau = config.s_tau();
    n_grid
        .iter()
        .map(|&n| {
            replicate(workers, replications, |r| -> Result<f64> {
                let sample = sample_scenario(config, n, stream_id(n as u64, r))?;
                let g_hat = km_fit(&sample, Target::Censoring);
                Ok((n as f64).sqrt()
                    * s_tau
                    * sup_distance(&g_hat, &config.true_censoring_curve(), config.tau))
            })?
            .into_iter()
            .collect()
        })
        .collect()
}

fn cells(sups: &[Vec<f64>], spec: &DoSpec, d_o: f64) -> Vec<CalibrationCell> {
    let mut out = Vec::new();
    for (w, &n) in sups.iter().zip(&spec.n_grid) {
        for &eta in &spec.eta_grid {
            let threshold = (eta / 2.0).sqrt() + d_o / 2.0;
            let hits = w.iter().filter(|&&x| x >= threshold).count();
            let prob_bound = 2.5 * (-eta).exp();
            // feasible iff fewer than `allowed + 1` draws reach the threshold
            let allowed = (prob_bound * w.len() as f64).floor() as usize;
            let mut sorted = w.clone();
            sorted.sort_by(|a, b| b.total_cmp(a));
            let required_d_o = match sorted.get(allowed) {
                Some(&x) => 2.0 * (x - (eta / 2.0).sqrt()),
                None => f64::NEG_INFINITY,
            };
            out.push(CalibrationCell {
                n,
                eta,
                frequency: hits as f64 / w.len() as f64,
                prob_bound,
                required_d_o,
            });
        }
    }
    out
}

fn feasible(sups: &[Vec<f64>], spec: &DoSpec, d_o: f64) -> bool {
    cells(sups, spec, d_o)
        .iter()
        .all(|c| c.frequency <= c.prob_bound)
}

/// Smallest `D_o` for which the DKW–KM event frequency stays below
/// `(5/2) e^{-eta}` on every grid cell, by bisection per scenario.
pub fn calibrate_d_o(spec: &DoSpec, workers: usize) -> Result<DoReport> {
    if !(spec.tolerance > 0.0 && spec.lower < spec.upper) {
        return Err(HarnessError::Usage(
            "need tolerance > 0 and lower < upper".into(),
        ));
    }
    if spec.scenarios.is_empty() {
        return Err(HarnessError::Usage(
            "calibration needs at least one scenario".into(),
        ));
    }
    let mut scenarios = Vec::new();
    for config in &spec.scenarios {
        config.validate()?;
        let sups = normalized_sups(config, &spec.n_grid, spec.replications, workers)?;
        let (mut lo, mut hi) = (spec.lower, spec.upper);
        let mut iterations = 0;
        let minimal = if feasible(&sups, spec, spec.lower) {
            hi = spec.lower;
            Some(spec.lower)
        } else if !feasible(&sups, spec, spec.upper) {
            None
        } else {
            while hi - lo > spec.tolerance {
                let mid = 0.5 * (lo + hi);
                if feasible(&sups, spec, mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
                iterations += 1;
            }
            Some(hi)
        };
        scenarios.push(ScenarioCalibration {
            scenario: scenario_label(config),
            minimal_d_o: minimal,
            bracket: (lo, hi),
            iterations,
            cells: cells(&sups, spec, minimal.unwrap_or(spec.upper)),
        });
    }
    let recommended_d_o = scenarios
        .iter()
        .map(|s| s.minimal_d_o)
        .try_fold(f64::NEG_INFINITY, |acc, d| d.map(|d| acc.max(d)));
    Ok(DoReport {
        scenarios,
        recommended_d_o,
        tolerance: spec.tolerance,
    })
}
