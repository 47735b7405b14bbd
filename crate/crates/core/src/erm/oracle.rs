use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::LossSpec;
use crate::bounds::BoundInputs;
use crate::ipcw::BoundedFunction;
use crate::num::{exp, ln, sqrt};
use crate::scenario::{draw_uncensored, scenario_rng, ScenarioConfig};
use crate::{Error, Result};

/// Default number of uncensored draws behind [`risk_oracle`].
pub const ORACLE_DRAWS: usize = 100_000;

const ORACLE_STREAM: u64 = u64::MAX - 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskEstimate {
    pub value: f64,
    pub stderr: f64,
    pub draws: usize,
}

/// `R_L(f) = E L(Y, f(T, Z))` by seeded Monte Carlo over uncensored draws.
pub fn risk_oracle(
    config: &ScenarioConfig,
    f: &BoundedFunction,
    loss: &LossSpec,
    draws: usize,
) -> Result<RiskEstimate> {
    Ok(risk_oracle_many(config, core::slice::from_ref(f), loss, draws)?[0])
}

/// Risks of several functions on one shared set of draws, so differences
/// between them carry no independent Monte Carlo noise.
pub fn risk_oracle_many(
    config: &ScenarioConfig,
    fs: &[BoundedFunction],
    loss: &LossSpec,
    draws: usize,
) -> Result<Vec<RiskEstimate>> {
    config.validate()?;
    if config.response_model.is_none() {
        return Err(Error::NoResponseModel);
    }
    if draws < 2 {
        return Err(Error::TooFewSamples { n: draws, min: 2 });
    }
    let mut rng = scenario_rng(config.seed, ORACLE_STREAM);
    // Welford running mean and sum of squared deviations
    let mut mean = vec![0.0; fs.len()];
    let mut m2 = vec![0.0; fs.len()];
    for i in 0..draws {
        let d = draw_uncensored(config, &mut rng);
        let y = d.y.expect("response model present");
        for (k, f) in fs.iter().enumerate() {
            let l = loss.eval(y, f.eval(d.t, &d.z));
            let delta = l - mean[k];
            mean[k] += delta / (i + 1) as f64;
            m2[k] += delta * (l - mean[k]);
        }
    }
    let r = draws as f64;
    Ok(mean
        .iter()
        .zip(&m2)
        .map(|(m, q)| RiskEstimate {
            value: *m,
            stderr: sqrt(q / (r - 1.0) / r),
            draws,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapBound {
    /// Bound on `R_L(f_n) - inf R_L`.
    pub value: f64,
    /// `(11/2) e^{-eta}`.
    pub failure_prob: f64,
    pub sqrt_n_term: f64,
    pub net_term: f64,
}

/// `(B / (H_hat G_hat^2)) (8 sqrt(2 eta + 2 log N) + 6 D_o) / sqrt(n)
///  + 4 eps L_M / (H_hat G_hat^2)`.
///
/// Uses `n`, `eta`, `d_o`, `h_hat_tau` and `g_hat_tau` from `inputs`.
pub fn oracle_gap_bound(
    inputs: &BoundInputs,
    loss: &LossSpec,
    net_size: usize,
    epsilon: f64,
) -> Result<GapBound> {
    let hh = inputs.h_hat_tau.ok_or(Error::MissingInput("H_hat_tau"))?;
    let g = inputs.g_hat_tau.ok_or(Error::MissingInput("G_hat_tau"))?;
    if !(hh > 0.0) {
        return Err(Error::NonpositiveNormalizer("H_hat_tau"));
    }
    if !(g > 0.0) {
        return Err(Error::NonpositiveNormalizer("G_hat_tau"));
    }
    if inputs.n == 0 {
        return Err(Error::TooFewSamples { n: 0, min: 1 });
    }
    if net_size == 0 {
        return Err(Error::EmptyNet);
    }
    if !(inputs.eta > 0.0) {
        return Err(Error::OutOfDomain {
            value: inputs.eta,
            reason: "eta must be positive",
        });
    }
    if !(epsilon >= 0.0) {
        return Err(Error::OutOfDomain {
            value: epsilon,
            reason: "net radius must be nonnegative",
        });
    }
    if !(inputs.d_o >= 0.0) {
        return Err(Error::OutOfDomain {
            value: inputs.d_o,
            reason: "D_o must be nonnegative",
        });
    }
    let norm = hh * g * g;
    let log_n = ln(net_size as f64);
    let sqrt_n_term = loss.bound_b() / norm
        * (8.0 * sqrt(2.0 * inputs.eta + 2.0 * log_n) + 6.0 * inputs.d_o)
        / sqrt(inputs.n as f64);
    let net_term = 4.0 * epsilon * loss.lipschitz() / norm;
    Ok(GapBound {
        value: sqrt_n_term + net_term,
        failure_prob: 5.5 * exp(-inputs.eta),
        sqrt_n_term,
        net_term,
    })
}
