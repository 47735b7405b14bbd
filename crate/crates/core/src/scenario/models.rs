use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::num::{exp, ln};
use crate::{Error, Result};

/// Law of the untruncated failure time `T*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FailureModel {
    Exponential { rate: f64 },
    Uniform { upper: f64 },
    PointMass { at: f64 },
    Mixture { components: Vec<WeightedFailure> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedFailure {
    pub weight: f64,
    pub model: FailureModel,
}

impl FailureModel {
    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            Self::Exponential { rate } if !(rate.is_finite() && *rate > 0.0) => Err(
                Error::InvalidConfig(format!("exponential rate must be positive, got {rate}")),
            ),
            Self::Uniform { upper } if !(upper.is_finite() && *upper > 0.0) => Err(
                Error::InvalidConfig(format!("uniform upper bound must be positive, got {upper}")),
            ),
            Self::PointMass { at } if !(at.is_finite() && *at >= 0.0) => Err(Error::InvalidConfig(
                format!("point mass location must be nonnegative, got {at}"),
            )),
            Self::Mixture { components } => {
                if components.is_empty() {
                    return Err(Error::InvalidConfig(
                        "mixture needs at least one component".into(),
                    ));
                }
                let mut total = 0.0;
                for c in components {
                    if !(c.weight.is_finite() && c.weight > 0.0) {
                        return Err(Error::InvalidConfig(format!(
                            "mixture weight {} must be positive",
                            c.weight
                        )));
                    }
                    c.model.validate()?;
                    total += c.weight;
                }
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidConfig(format!(
                        "mixture weights sum to {total}, expected 1"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `P(T* > t)`
    pub fn prob_greater(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 1.0;
        }
        match self {
            Self::Exponential { rate } => exp(-rate * t),
            Self::Uniform { upper } => (1.0 - t / upper).clamp(0.0, 1.0),
            Self::PointMass { at } => f64::from(u8::from(t < *at)),
            Self::Mixture { components } => components
                .iter()
                .map(|c| c.weight * c.model.prob_greater(t))
                .sum(),
        }
    }

    /// `P(T* >= t)`
    pub fn prob_at_least(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        match self {
            Self::PointMass { at } => f64::from(u8::from(t <= *at)),
            Self::Mixture { components } => components
                .iter()
                .map(|c| c.weight * c.model.prob_at_least(t))
                .sum(),
            _ => self.prob_greater(t),
        }
    }

    /// Density of the continuous part.
    pub(crate) fn density(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match self {
            Self::Exponential { rate } => rate * exp(-rate * t),
            Self::Uniform { upper } => {
                if t < *upper {
                    1.0 / upper
                } else {
                    0.0
                }
            }
            Self::PointMass { .. } => 0.0,
            Self::Mixture { components } => components
                .iter()
                .map(|c| c.weight * c.model.density(t))
                .sum(),
        }
    }

    /// Atoms `(location, mass)` of `T*`.
    pub(crate) fn atoms(&self, out: &mut Vec<(f64, f64)>, scale: f64) {
        match self {
            Self::PointMass { at } => out.push((*at, scale)),
            Self::Mixture { components } => {
                for c in components {
                    c.model.atoms(out, scale * c.weight);
                }
            }
            _ => {}
        }
    }

    /// Points where the density is discontinuous.
    pub(crate) fn density_breaks(&self, out: &mut Vec<f64>) {
        match self {
            Self::Uniform { upper } => out.push(*upper),
            Self::Mixture { components } => {
                for c in components {
                    c.model.density_breaks(out);
                }
            }
            _ => {}
        }
    }

    /// Inverse-CDF draw; mixtures consume one extra uniform for the component.
    pub(crate) fn draw(&self, mut uniform: impl FnMut() -> f64) -> f64 {
        match self {
            Self::Exponential { rate } => -ln(1.0 - uniform()) / rate,
            Self::Uniform { upper } => upper * uniform(),
            Self::PointMass { at } => *at,
            Self::Mixture { components } => {
                let pick = uniform();
                let mut acc = 0.0;
                for c in components {
                    acc += c.weight;
                    if pick < acc {
                        return c.model.draw(uniform);
                    }
                }
                components[components.len() - 1].model.draw(uniform)
            }
        }
    }
}

/// Law of the censoring time `C`; always continuous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CensoringModel {
    None,
    Exponential { rate: f64 },
    Uniform { upper: f64 },
}

impl CensoringModel {
    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            Self::Exponential { rate } if !(rate.is_finite() && *rate > 0.0) => Err(
                Error::InvalidConfig(format!("censoring rate must be positive, got {rate}")),
            ),
            Self::Uniform { upper } if !(upper.is_finite() && *upper > 0.0) => {
                Err(Error::InvalidConfig(format!(
                    "censoring upper bound must be positive, got {upper}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// `G(t) = P(C > t)`
    pub fn survival(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 1.0;
        }
        match self {
            Self::None => 1.0,
            Self::Exponential { rate } => exp(-rate * t),
            Self::Uniform { upper } => (1.0 - t / upper).clamp(0.0, 1.0),
        }
    }

    /// Hazard density of `Lambda^C`.
    pub fn hazard(&self, t: f64) -> f64 {
        match self {
            Self::None => 0.0,
            Self::Exponential { rate } => *rate,
            Self::Uniform { upper } => {
                if t < *upper {
                    1.0 / (upper - t)
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// `Lambda^C(t)`
    pub fn cumulative_hazard(&self, t: f64) -> f64 {
        -ln(self.survival(t))
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Self::None)
    }

    pub(crate) fn draw(&self, mut uniform: impl FnMut() -> f64) -> f64 {
        match self {
            Self::None => f64::INFINITY,
            Self::Exponential { rate } => -ln(1.0 - uniform()) / rate,
            Self::Uniform { upper } => upper * uniform(),
        }
    }
}

/// Conditional law of the response `Y` given `(T, Z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ResponseModel {
    /// `y = clamp(min(t,1) z1 + U(-noise, noise), 0, 1)`
    TimeTimesCovariate { noise: f64 },
    /// `y = value`
    Constant { value: f64 },
}

impl ResponseModel {
    pub(crate) fn validate(&self, covariate_dim: usize) -> Result<()> {
        match self {
            Self::TimeTimesCovariate { noise } => {
                if covariate_dim == 0 {
                    return Err(Error::InvalidConfig(
                        "time-times-covariate response needs covariate_dim >= 1".into(),
                    ));
                }
                if !(noise.is_finite() && *noise >= 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "noise must be nonnegative, got {noise}"
                    )));
                }
                Ok(())
            }
            Self::Constant { value } if !value.is_finite() => Err(Error::InvalidConfig(
                "constant response must be finite".into(),
            )),
            Self::Constant { .. } => Ok(()),
        }
    }

    /// Closed interval containing every response value.
    pub fn range(&self) -> (f64, f64) {
        match self {
            Self::TimeTimesCovariate { .. } => (0.0, 1.0),
            Self::Constant { value } => (*value, *value),
        }
    }

    pub(crate) fn draw(&self, t: f64, z: &[f64], mut uniform: impl FnMut() -> f64) -> f64 {
        match self {
            Self::TimeTimesCovariate { noise } => {
                let e = noise * (2.0 * uniform() - 1.0);
                (t.min(1.0) * z[0] + e).clamp(0.0, 1.0)
            }
            Self::Constant { value } => *value,
        }
    }
}
