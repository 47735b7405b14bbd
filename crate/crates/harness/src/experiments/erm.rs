use ipcw_core::bounds::BoundInputs;
use ipcw_core::erm::{
    censored_erm, oracle_gap_bound, risk_oracle_many, FunctionClass, LossDomain, LossSpec,
};
use ipcw_core::ipcw::BoundedFunction;
use ipcw_core::scenario::{sample_scenario, ScenarioConfig};
use ipcw_core::survival::tail_estimates;
use ipcw_core::Error;
use serde::{Deserialize, Serialize};

use super::scenario_label;
use crate::engine::{replicate, stream_id};
use crate::error::{HarnessError, Result};
use crate::stats::{binomial_stderr, moments, Moments};

/// Points of the fine grid used to approximate `inf R_L` over a
/// parametric class.
const INF_GRID: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ClassSpec {
    /// Constants on `[lo, hi]`, searched over the exact `epsilon`-net.
    Constants { lo: f64, hi: f64 },
    /// `a t`, `a in [lo, hi]`.
    Linear { lo: f64, hi: f64 },
    /// Constants on `[lo, hi]`, searched over `points` equispaced values;
    /// the grid is a net of radius `(hi - lo) / (2 (points - 1))`.
    ConstantGrid { lo: f64, hi: f64, points: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossKind {
    Squared,
    Absolute,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErmSpec {
    pub scenario: ScenarioConfig,
    pub class: ClassSpec,
    pub loss: LossKind,
    /// Net radius; ignored for `constant-grid`.
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// Confidence level of the gap bound, `eta = ln(5.5 / delta)`.
    pub delta: f64,
    pub d_o: f64,
    pub n_grid: Vec<usize>,
    pub replications: usize,
    /// Gap level for the consistency frequencies.
    pub eps_tol: f64,
    pub oracle_draws: usize,
}

impl ErmSpec {
    /// Constant class searched over 101 grid points, squared loss.
    pub fn default_with(n_grid: Vec<usize>, replications: usize) -> Self {
        Self {
            scenario: ScenarioConfig::default_erm_scenario(),
            class: ClassSpec::ConstantGrid {
                lo: 0.0,
                hi: 1.0,
                points: 101,
            },
            loss: LossKind::Squared,
            epsilon: None,
            delta: 0.05,
            d_o: 1.0,
            n_grid,
            replications,
            eps_tol: 0.05,
            oracle_draws: ipcw_core::erm::ORACLE_DRAWS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErmCell {
    pub n: usize,
    pub replications: usize,
    pub excluded: usize,
    /// Moments of `R_L(f_n) - inf R_L`.
    pub gap: Moments,
    pub max_gap: f64,
    pub mean_bound: f64,
    /// Fraction of replications with `gap <= bound`.
    pub bound_dominates: f64,
    /// Fraction of replications with `gap > eps_tol`.
    pub exceed_freq: f64,
    pub exceed_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub scenario: String,
    pub class: String,
    pub net_size: usize,
    pub epsilon: f64,
    pub eta: f64,
    pub failure_prob: f64,
    pub inf_risk: f64,
    pub inf_risk_stderr: f64,
    pub cells: Vec<ErmCell>,
    /// `exceed_freq` nonincreasing in `n` up to `2 mc_stderr`.
    pub monotone: bool,
}

struct Resolved {
    class: FunctionClass,
    search: FunctionClass,
    epsilon: f64,
    loss: LossSpec,
}

fn resolve(spec: &ErmSpec) -> Result<Resolved> {
    let tau = spec.scenario.tau;
    let need_eps = || {
        spec.epsilon
            .ok_or_else(|| HarnessError::Usage("this class needs an epsilon".into()))
    };
    let (class, search, epsilon) = match spec.class {
        ClassSpec::Constants { lo, hi } => {
            let c = FunctionClass::Constants { lo, hi };
            (c.clone(), c, need_eps()?)
        }
        ClassSpec::Linear { lo, hi } => {
            let c = FunctionClass::LinearInTime { lo, hi, tau };
            (c.clone(), c, need_eps()?)
        }
        ClassSpec::ConstantGrid { lo, hi, points } => {
            if points < 2 {
                return Err(HarnessError::Usage(
                    "constant-grid needs at least 2 points".into(),
                ));
            }
            let grid = (0..points)
                .map(|j| BoundedFunction::constant(lo + (hi - lo) * j as f64 / (points - 1) as f64))
                .collect();
            (
                FunctionClass::Constants { lo, hi },
                FunctionClass::Finite(grid),
                (hi - lo) / (2 * (points - 1)) as f64,
            )
        }
    };
    class.validate()?;
    let response = spec
        .scenario
        .response_model
        .as_ref()
        .ok_or(Error::NoResponseModel)?;
    let domain = LossDomain {
        y: response.range(),
        s: class.value_range(),
    };
    let loss = match spec.loss {
        LossKind::Squared => LossSpec::squared(domain)?,
        LossKind::Absolute => {
            let b = (domain.y.1 - domain.s.0)
                .max(domain.s.1 - domain.y.0)
                .max(f64::MIN_POSITIVE);
            LossSpec::new(b, 1.0, domain, |y, s| (y - s).abs())?
        }
    };
    Ok(Resolved {
        class,
        search,
        epsilon,
        loss,
    })
}

/// Functions whose oracle risks are needed: the search net followed by a
/// fine grid of the class for `inf R_L`.
fn oracle_functions(resolved: &Resolved) -> Result<(Vec<BoundedFunction>, usize)> {
    let net = resolved.search.net(resolved.epsilon)?;
    let net_size = net.len();
    let mut fs: Vec<BoundedFunction> = net.into_iter().map(|p| p.function).collect();
    if let FunctionClass::Constants { lo, hi } | FunctionClass::LinearInTime { lo, hi, .. } =
        resolved.class
    {
        for j in 0..INF_GRID {
            fs.push(
                resolved
                    .class
                    .member(lo + (hi - lo) * j as f64 / (INF_GRID - 1) as f64)?,
            );
        }
    }
    Ok((fs, net_size))
}

/// Censored ERM over `n_grid`: realized risk gaps, the oracle gap bound
/// per replication and the frequency of `{gap > eps_tol}`.
pub fn run_erm_consistency(spec: &ErmSpec, workers: usize) -> Result<ConsistencyReport> {
    let config = &spec.scenario;
    config.validate()?;
    if !(spec.delta > 0.0 && spec.delta < 1.0) {
        return Err(HarnessError::Usage("delta must lie in (0, 1)".into()));
    }
    let resolved = resolve(spec)?;
    let (functions, net_size) = oracle_functions(&resolved)?;
    let risks = risk_oracle_many(config, &functions, &resolved.loss, spec.oracle_draws)?;
    let inf = *risks
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("nonempty oracle set");
    let eta = (5.5 / spec.delta).ln();

    let mut cells = Vec::new();
    for &n in &spec.n_grid {
        let outcomes = replicate(
            workers,
            spec.replications,
            |r| -> Result<Option<(f64, f64)>> {
                let sample = sample_scenario(config, n, stream_id(n as u64, r))?;
                let fit =
                    match censored_erm(&sample, &resolved.search, &resolved.loss, resolved.epsilon)
                    {
                        Ok(fit) => fit,
                        Err(e) if e.is_numeric() => return Ok(None),
                        Err(e) => return Err(e.into()),
                    };
                let tails = tail_estimates(&sample);
                let inputs = BoundInputs {
                    n,
                    eta,
                    d_o: spec.d_o,
                    h_hat_tau: Some(tails.h_hat_tau),
                    g_hat_tau: Some(tails.g_hat_tau),
                    ..Default::default()
                };
                let bound =
                    match oracle_gap_bound(&inputs, &resolved.loss, net_size, resolved.epsilon) {
                        Ok(b) => b,
                        Err(e) if e.is_numeric() => return Ok(None),
                        Err(e) => return Err(e.into()),
                    };
                Ok(Some((
                    risks[fit.argmin_index].value - inf.value,
                    bound.value,
                )))
            },
        )?
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let kept: Vec<(f64, f64)> = outcomes.into_iter().flatten().collect();
        let used = kept.len();
        let gaps: Vec<f64> = kept.iter().map(|p| p.0).collect();
        let exceed_freq =
            gaps.iter().filter(|&&g| g > spec.eps_tol).count() as f64 / used.max(1) as f64;
        cells.push(ErmCell {
            n,
            replications: spec.replications,
            excluded: spec.replications - used,
            gap: moments(&gaps),
            max_gap: gaps.iter().copied().fold(0.0, f64::max),
            mean_bound: kept.iter().map(|p| p.1).sum::<f64>() / used.max(1) as f64,
            bound_dominates: kept.iter().filter(|p| p.0 <= p.1).count() as f64 / used.max(1) as f64,
            exceed_freq,
            exceed_stderr: binomial_stderr(exceed_freq, used),
        });
    }
    let monotone = cells.windows(2).all(|w| {
        w[1].exceed_freq <= w[0].exceed_freq + 2.0 * w[0].exceed_stderr.max(w[1].exceed_stderr)
    });
    Ok(ConsistencyReport {
        scenario: scenario_label(config),
        class: resolved.class.describe(),
        net_size,
        epsilon: resolved.epsilon,
        eta,
        failure_prob: 5.5 * (-eta).exp(),
        inf_risk: inf.value,
        inf_risk_stderr: inf.stderr,
        cells,
        monotone,
    })
}
