//! Generative models for `(T, C, Z, Y)` with closed-form truth.
//!
//! Failure times are truncated at the horizon, `T = min(T*, tau)`, so the
//! failure law carries an atom at `tau` whenever `P(T* >= tau) > 0`.
//! Censoring is always continuous, which keeps `P(T = C) = 0`.

mod models;
mod quadrature;
mod sampling;

use alloc::format;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use crate::survival::SurvivalFunction;
use crate::{Error, Result};

pub use models::{CensoringModel, FailureModel, ResponseModel, WeightedFailure};
pub(crate) use quadrature::{CovariateDesign, TimePanels};
pub use sampling::{draw_uncensored, sample_scenario, scenario_rng, FullDraw, ScenarioRng};

pub const SCHEMA_VERSION: u32 = 1;

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

/// Declarative description of a simulation scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub failure_model: FailureModel,
    pub censoring_model: CensoringModel,
    #[serde(default)]
    pub covariate_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub response_model: Option<ResponseModel>,
    pub tau: f64,
    pub seed: u64,
}

impl ScenarioConfig {
    /// `T = min(Exp(1), 1)`, `C ~ Exp(0.5)`, `tau = 1`, `Z ~ U(0,1)`.
    pub fn default_scenario() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            name: Some("default".into()),
            failure_model: FailureModel::Exponential { rate: 1.0 },
            censoring_model: CensoringModel::Exponential { rate: 0.5 },
            covariate_dim: 1,
            response_model: None,
            tau: 1.0,
            seed: 20_240_601,
        }
    }

    /// Default scenario with response `y = clamp(min(t,1) z1 + U(-0.1, 0.1), 0, 1)`.
    pub fn default_erm_scenario() -> Self {
        Self {
            name: Some("default-erm".into()),
            response_model: Some(ResponseModel::TimeTimesCovariate { noise: 0.1 }),
            ..Self::default_scenario()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidConfig(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tau must be positive, got {}",
                self.tau
            )));
        }
        self.failure_model.validate()?;
        self.censoring_model.validate()?;
        if let Some(r) = &self.response_model {
            r.validate(self.covariate_dim)?;
        }
        let h = self.h_tau();
        if !(h > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "H_tau = P(T >= tau) P(C >= tau) = {h} must be positive"
            )));
        }
        Ok(())
    }

    /// `S(t) = P(T > t)` for the truncated failure time.
    pub fn failure_survival(&self, t: f64) -> f64 {
        if t >= self.tau {
            0.0
        } else {
            self.failure_model.prob_greater(t)
        }
    }

    /// `S(t-) = P(T >= t)` for the truncated failure time.
    pub fn failure_survival_left(&self, t: f64) -> f64 {
        if t > self.tau {
            0.0
        } else {
            self.failure_model.prob_at_least(t)
        }
    }

    /// `S_tau = P(T >= tau)`.
    pub fn s_tau(&self) -> f64 {
        self.failure_survival_left(self.tau)
    }

    /// `G_tau = P(C >= tau)`.
    pub fn g_tau(&self) -> f64 {
        self.censoring_model.survival(self.tau)
    }

    /// `H_tau = S_tau G_tau`.
    pub fn h_tau(&self) -> f64 {
        self.s_tau() * self.g_tau()
    }

    pub fn true_failure_curve(&self) -> TrueFailureCurve<'_> {
        TrueFailureCurve(self)
    }

    pub fn true_censoring_curve(&self) -> TrueCensoringCurve<'_> {
        TrueCensoringCurve(&self.censoring_model)
    }
}

/// Closed-form `S` of the truncated failure time.
#[derive(Debug, Clone, Copy)]
pub struct TrueFailureCurve<'a>(&'a ScenarioConfig);

impl SurvivalFunction for TrueFailureCurve<'_> {
    fn eval(&self, t: f64) -> f64 {
        self.0.failure_survival(t)
    }
    fn left_limit(&self, t: f64) -> f64 {
        self.0.failure_survival_left(t)
    }
}

/// Closed-form `G`; continuous, so eval and left limit coincide.
#[derive(Debug, Clone, Copy)]
pub struct TrueCensoringCurve<'a>(&'a CensoringModel);

impl SurvivalFunction for TrueCensoringCurve<'_> {
    fn eval(&self, t: f64) -> f64 {
        self.0.survival(t)
    }
    fn left_limit(&self, t: f64) -> f64 {
        self.0.survival(t)
    }
}
