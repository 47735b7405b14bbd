//! Censored-data containers, product-limit curves and the discrete identities
//! that tie the Kaplan–Meier curves of failure and censoring together.

mod curve;
mod estimators;
mod identities;

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use curve::{sup_distance, StepCurve, SurvivalFunction};
pub use estimators::{at_risk, km_fit, nelson_aalen_censoring, tail_estimates, TailEstimates};
pub use identities::{identity_suite, IdentityReport};

/// One right-censored record: observed time `u = min(T, C)`, failure
/// indicator `delta = 1{T <= C}`, covariates and an optional response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensoredObservation {
    pub u: f64,
    pub delta: bool,
    #[serde(default)]
    pub z: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
}

impl CensoredObservation {
    pub fn new(u: f64, delta: bool) -> Self {
        Self {
            u,
            delta,
            z: Vec::new(),
            y: None,
        }
    }

    pub fn with_covariates(mut self, z: Vec<f64>) -> Self {
        self.z = z;
        self
    }

    pub fn with_response(mut self, y: f64) -> Self {
        self.y = Some(y);
        self
    }
}

/// Which survival function a product-limit fit targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// `S`, events are `delta = 1`.
    Failure,
    /// `G`, events are `delta = 0`.
    Censoring,
}

/// Per distinct observed time: counts of failures, censorings and the risk set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct EventTime {
    pub t: f64,
    pub failures: usize,
    pub censorings: usize,
    pub at_risk: usize,
}

/// A validated, immutable right-censored sample with study horizon `tau`.
#[derive(Debug, Clone)]
pub struct CensoredSample {
    observations: Vec<CensoredObservation>,
    tau: f64,
    dim: usize,
    /// Observed times in ascending order.
    sorted_u: Vec<f64>,
    events: Vec<EventTime>,
    ties: bool,
}

impl CensoredSample {
    pub fn new(observations: Vec<CensoredObservation>, tau: f64) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::EmptySample);
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tau must be positive and finite, got {tau}"
            )));
        }
        let dim = observations[0].z.len();
        for (index, obs) in observations.iter().enumerate() {
            let reason = if !obs.u.is_finite() || obs.u < 0.0 {
                Some(format!(
                    "observed time {} is not a nonnegative finite number",
                    obs.u
                ))
            } else if obs.u > tau {
                Some(format!("observed time {} exceeds tau = {tau}", obs.u))
            } else if obs.z.len() != dim {
                Some(format!("expected {dim} covariates, found {}", obs.z.len()))
            } else if obs.z.iter().any(|z| !z.is_finite()) {
                Some("non-finite covariate".into())
            } else if obs.y.is_some_and(|y| !y.is_finite()) {
                Some("non-finite response".into())
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(Error::InvalidObservation { index, reason });
            }
        }

        let mut order: Vec<usize> = (0..observations.len()).collect();
        order.sort_by(|&a, &b| observations[a].u.total_cmp(&observations[b].u));
        let sorted_u: Vec<f64> = order.iter().map(|&i| observations[i].u).collect();

        let n = observations.len();
        let mut events: Vec<EventTime> = Vec::new();
        let mut seen = 0;
        while seen < n {
            let t = sorted_u[seen];
            let mut e = EventTime {
                t,
                failures: 0,
                censorings: 0,
                at_risk: n - seen,
            };
            while seen < n && sorted_u[seen] == t {
                if observations[order[seen]].delta {
                    e.failures += 1;
                } else {
                    e.censorings += 1;
                }
                seen += 1;
            }
            events.push(e);
        }
        let ties = events.iter().any(|e| e.failures > 0 && e.censorings > 0);

        Ok(Self {
            observations,
            tau,
            dim,
            sorted_u,
            events,
            ties,
        })
    }

    /// Builds a covariate-free sample from `(u, delta)` pairs.
    pub fn from_pairs(pairs: &[(f64, bool)], tau: f64) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(u, d)| CensoredObservation::new(u, d))
                .collect(),
            tau,
        )
    }

    pub fn observations(&self) -> &[CensoredObservation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn failures(&self) -> usize {
        self.observations.iter().filter(|o| o.delta).count()
    }

    /// Set when some failure time equals some censoring time.
    pub fn has_failure_censoring_ties(&self) -> bool {
        self.ties
    }

    pub(crate) fn sorted_times(&self) -> &[f64] {
        &self.sorted_u
    }

    pub(crate) fn events(&self) -> &[EventTime] {
        &self.events
    }
}
