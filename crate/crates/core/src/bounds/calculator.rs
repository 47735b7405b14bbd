use serde::{Deserialize, Serialize};

use super::{BoundKind, Normalization};
use crate::num::{exp, ln, sqrt};
use crate::{Error, Result};

/// Constants feeding the bounds. Only the fields used by the selected kind
/// need to be set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub n: usize,
    pub eta: f64,
    #[serde(default)]
    pub m: Option<f64>,
    #[serde(default = "default_d_o")]
    pub d_o: f64,
    /// `H_tau = P(U >= tau)`
    #[serde(default)]
    pub h_tau: Option<f64>,
    /// `S_tau = P(T >= tau)`
    #[serde(default)]
    pub s_tau: Option<f64>,
    #[serde(default)]
    pub h_hat_tau: Option<f64>,
    #[serde(default)]
    pub g_hat_tau: Option<f64>,
    #[serde(default)]
    pub s_hat_tau: Option<f64>,
    #[serde(default)]
    pub sigma2: Option<f64>,
    /// `|F|` for the finite-class union bound.
    #[serde(default)]
    pub class_size: Option<usize>,
    /// Use `e^{-n H_tau / 3}` instead of `e^{-H_tau / (3n)}`.
    #[serde(default)]
    pub corrected_chernoff: bool,
}

fn default_d_o() -> f64 {
    1.0
}

impl Default for BoundInputs {
    fn default() -> Self {
        Self {
            n: 1,
            eta: 1.0,
            m: None,
            d_o: default_d_o(),
            h_tau: None,
            s_tau: None,
            h_hat_tau: None,
            g_hat_tau: None,
            s_hat_tau: None,
            sigma2: None,
            class_size: None,
            corrected_chernoff: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub kind: BoundKind,
    /// Bound on the quantity named by `normalization`.
    pub deviation_threshold: f64,
    /// Right-hand side `c e^{-eta} + additive`; may exceed 1.
    pub prob_bound: f64,
    pub normalization: Normalization,
    /// `prob_bound >= 1`: formally valid but uninformative.
    pub vacuous: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChernoffVariant {
    Third,
    Half,
}

/// Multiplicative-Chernoff additive term. Literal form `e^{-H_tau/(3n)}`
/// (or `/(2n)`); `corrected` gives `e^{-n H_tau/3}` (or `/2`).
pub fn chernoff_term(h_tau: f64, n: usize, variant: ChernoffVariant, corrected: bool) -> f64 {
    let div = match variant {
        ChernoffVariant::Third => 3.0,
        ChernoffVariant::Half => 2.0,
    };
    let n = n as f64;
    if corrected {
        exp(-n * h_tau / div)
    } else {
        exp(-h_tau / (div * n))
    }
}

fn require(value: Option<f64>, name: &'static str) -> Result<f64> {
    let v = value.ok_or(Error::MissingInput(name))?;
    if !v.is_finite() {
        return Err(Error::OutOfDomain {
            value: v,
            reason: "input must be finite",
        });
    }
    Ok(v)
}

/// A probability-type constant used as a divisor: must lie in (0, 1].
fn normalizer(value: Option<f64>, name: &'static str) -> Result<f64> {
    let v = require(value, name)?;
    if v <= 0.0 {
        return Err(Error::NonpositiveNormalizer(name));
    }
    if v > 1.0 + 1e-12 {
        return Err(Error::OutOfDomain {
            value: v,
            reason: "tail probabilities must not exceed 1",
        });
    }
    Ok(v)
}

fn positive(value: Option<f64>, name: &'static str) -> Result<f64> {
    let v = require(value, name)?;
    if v <= 0.0 {
        return Err(Error::OutOfDomain {
            value: v,
            reason: "must be positive",
        });
    }
    Ok(v)
}

fn nonnegative(value: Option<f64>, name: &'static str) -> Result<f64> {
    let v = require(value, name)?;
    if v < 0.0 {
        return Err(Error::OutOfDomain {
            value: v,
            reason: "must be nonnegative",
        });
    }
    Ok(v)
}

/// `(coefficient c, additive term a)` of `c e^{-eta} + a`.
fn probability_terms(kind: BoundKind, inputs: &BoundInputs) -> Result<(f64, f64)> {
    let chernoff = |inputs: &BoundInputs| -> Result<f64> {
        let h = normalizer(inputs.h_tau, "H_tau")?;
        Ok(chernoff_term(
            h,
            inputs.n,
            ChernoffVariant::Third,
            inputs.corrected_chernoff,
        ))
    };
    Ok(match kind {
        BoundKind::HoeffdingSimple => (4.5, 0.0),
        BoundKind::HoeffdingDistribution => (4.5, chernoff(inputs)?),
        BoundKind::DkwKm => (2.5, 0.0),
        BoundKind::DkwKmEmpirical => (3.5, 0.0),
        BoundKind::HoeffdingEmpirical => (5.5, 0.0),
        BoundKind::FiniteClassUnion => {
            let size = inputs.class_size.ok_or(Error::MissingInput("class_size"))?;
            if size == 0 {
                return Err(Error::OutOfDomain {
                    value: 0.0,
                    reason: "class_size must be at least 1",
                });
            }
            (5.5 * size as f64, 0.0)
        }
        BoundKind::ClassDistribution => (5.0, chernoff(inputs)?),
        BoundKind::ClassEmpirical => (6.0, 0.0),
        BoundKind::ClassSimpleSup => (5.0, 0.0),
        BoundKind::Bernstein => (11.5, 0.0),
        BoundKind::BernsteinDistribution => (11.5, 2.0 * chernoff(inputs)?),
    })
}

fn check_n(kind: BoundKind, n: usize) -> Result<()> {
    let min = if kind == BoundKind::BernsteinDistribution {
        4
    } else {
        1
    };
    if n < min {
        return Err(Error::TooFewSamples { n, min });
    }
    Ok(())
}

/// Threshold and probability bound of `kind` at the given constants.
pub fn deviation_bound(kind: BoundKind, inputs: &BoundInputs) -> Result<BoundResult> {
    check_n(kind, inputs.n)?;
    let eta = positive(Some(inputs.eta), "eta")?;
    let d = nonnegative(Some(inputs.d_o), "D_o")?;
    let root_n = sqrt(inputs.n as f64);
    let n = inputs.n as f64;
    let half = sqrt(eta / 2.0); // sqrt(eta/2)
    let double = sqrt(2.0 * eta); // sqrt(2 eta)

    let threshold = match kind {
        BoundKind::HoeffdingSimple => {
            let m = positive(inputs.m, "M")?;
            let h = normalizer(inputs.h_tau, "H_tau")?;
            let g = normalizer(inputs.g_hat_tau, "G_hat_tau")?;
            m * (3.0 * half + d / 2.0) / (root_n * h * g)
        }
        BoundKind::HoeffdingDistribution => {
            let m = positive(inputs.m, "M")?;
            let h = normalizer(inputs.h_tau, "H_tau")?;
            m * (3.0 * half + d / 2.0 + 2.0) / (root_n * h * h)
        }
        BoundKind::DkwKm => {
            let s = normalizer(inputs.s_tau, "S_tau")?;
            (half + d / 2.0) / (root_n * s)
        }
        BoundKind::DkwKmEmpirical => {
            let hh = normalizer(inputs.h_hat_tau, "H_hat_tau")?;
            (double + d) / (root_n * hh)
        }
        BoundKind::HoeffdingEmpirical | BoundKind::FiniteClassUnion => {
            let m = positive(inputs.m, "M")?;
            let hh = normalizer(inputs.h_hat_tau, "H_hat_tau")?;
            let g = normalizer(inputs.g_hat_tau, "G_hat_tau")?;
            m * (4.0 * double + 3.0 * d) / (root_n * hh * g * g)
        }
        BoundKind::ClassDistribution => {
            let m = positive(inputs.m, "M")?;
            let h = normalizer(inputs.h_tau, "H_tau")?;
            m * (3.0 * half + 2.0 * d + 2.0) / (root_n * h * h)
        }
        BoundKind::ClassEmpirical => {
            let m = positive(inputs.m, "M")?;
            let hh = normalizer(inputs.h_hat_tau, "H_hat_tau")?;
            let g = normalizer(inputs.g_hat_tau, "G_hat_tau")?;
            m * (4.0 * double + 4.0 * d) / (root_n * hh * g * g)
        }
        BoundKind::ClassSimpleSup => {
            let m = positive(inputs.m, "M")?;
            let h = normalizer(inputs.h_tau, "H_tau")?;
            let g = normalizer(inputs.g_hat_tau, "G_hat_tau")?;
            m * (3.0 * half + 2.0 * d) / (root_n * h * g)
        }
        BoundKind::Bernstein => {
            let m = positive(inputs.m, "M")?;
            let sigma2 = nonnegative(inputs.sigma2, "sigma2")?;
            let h = normalizer(inputs.h_tau, "H_tau")?;
            let hh = normalizer(inputs.h_hat_tau, "H_hat_tau")?;
            let s = normalizer(inputs.s_tau, "S_tau")?;
            let sh = nonnegative(inputs.s_hat_tau, "S_hat_tau")?;
            sqrt(2.0 * sigma2 * eta / n)
                + m / (n * h) * (2.0 * eta + (s + sh) / (h * hh) * (3.0 * half + 2.0 * d) * double)
        }
        BoundKind::BernsteinDistribution => {
            let m = positive(inputs.m, "M")?;
            let sigma2 = nonnegative(inputs.sigma2, "sigma2")?;
            let h = normalizer(inputs.h_tau, "H_tau")?;
            sqrt(2.0 * sigma2 * eta / n)
                + m / (n * h) * (2.0 * eta + 2.0 / (h * h) * (3.0 * half + 2.0 * d + 3.0) * double)
        }
    };

    let (coefficient, additive) = probability_terms(kind, inputs)?;
    let prob_bound = coefficient * exp(-eta) + additive;
    Ok(BoundResult {
        kind,
        deviation_threshold: threshold,
        prob_bound,
        normalization: kind.normalization(),
        vacuous: prob_bound >= 1.0,
    })
}

/// Solves `c e^{-eta} + a = delta` for `eta`. The additive terms do not
/// depend on `eta`, so the solution is closed-form.
pub fn invert_confidence(kind: BoundKind, delta: f64, inputs: &BoundInputs) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::OutOfDomain {
            value: delta,
            reason: "delta must lie in (0, 1)",
        });
    }
    check_n(kind, inputs.n)?;
    let (coefficient, additive) = probability_terms(kind, inputs)?;
    if additive >= delta {
        return Err(Error::Unattainable {
            delta,
            floor: additive,
        });
    }
    Ok(ln(coefficient / (delta - additive)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple_inputs() -> BoundInputs {
        BoundInputs {
            n: 100,
            eta: 90f64.ln(),
            m: Some(1.0),
            d_o: 1.0,
            h_tau: Some((-1.5f64).exp()),
            g_hat_tau: Some((-0.5f64).exp()),
            ..Default::default()
        }
    }

    #[test]
    fn hoeffding_simple_worked_example() {
        let r = deviation_bound(BoundKind::HoeffdingSimple, &simple_inputs()).unwrap();
        assert!(
            (r.deviation_threshold - 3.6946).abs() < 1e-3,
            "{}",
            r.deviation_threshold
        );
        assert!((r.prob_bound - 0.05).abs() < 1e-15);
        assert!(!r.vacuous);
        let expected = (3.0 * (90f64.ln() / 2.0).sqrt() + 0.5) / (10.0 * (-2.0f64).exp());
        assert!((r.deviation_threshold - expected).abs() < 1e-14);
    }

    #[test]
    fn bernstein_limit() {
        let base = BoundInputs {
            n: 50,
            eta: 1e-12,
            m: Some(1.0),
            d_o: 0.0,
            h_tau: Some(1.0),
            h_hat_tau: Some(1.0),
            s_tau: Some(0.5),
            s_hat_tau: Some(0.5),
            sigma2: Some(0.0),
            ..Default::default()
        };
        let r = deviation_bound(BoundKind::Bernstein, &base).unwrap();
        assert!(r.deviation_threshold < 1e-12);
        // closed form with S = S_hat, H = H_hat = 1, D_o = 0
        let eta: f64 = 2.0;
        let inputs = BoundInputs {
            eta,
            sigma2: Some(0.04),
            ..base
        };
        let expect = (2.0 * 0.04 * eta / 50.0).sqrt()
            + (1.0 / 50.0)
                * (2.0 * eta + 2.0 * 0.5 * 3.0 * (eta / 2.0).sqrt() * (2.0 * eta).sqrt());
        let r = deviation_bound(BoundKind::Bernstein, &inputs).unwrap();
        assert!((r.deviation_threshold - expect).abs() < 1e-14);
        assert!((r.prob_bound - 11.5 * (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn union_of_one_is_empirical() {
        let inputs = BoundInputs {
            n: 200,
            eta: 2.0,
            m: Some(1.0),
            h_hat_tau: Some(0.2),
            g_hat_tau: Some(0.6),
            class_size: Some(1),
            ..Default::default()
        };
        let a = deviation_bound(BoundKind::FiniteClassUnion, &inputs).unwrap();
        let b = deviation_bound(BoundKind::HoeffdingEmpirical, &inputs).unwrap();
        assert_eq!(a.deviation_threshold, b.deviation_threshold);
        assert_eq!(a.prob_bound, b.prob_bound);
        let ten = deviation_bound(
            BoundKind::FiniteClassUnion,
            &BoundInputs {
                class_size: Some(10),
                ..inputs
            },
        )
        .unwrap();
        assert!((ten.prob_bound - 10.0 * b.prob_bound).abs() < 1e-15);
    }

    #[test]
    fn chernoff_values() {
        assert!(
            (chernoff_term(0.3, 10, ChernoffVariant::Third, false) - (-0.01f64).exp()).abs()
                < 1e-15
        );
        assert!((chernoff_term(0.3, 10, ChernoffVariant::Third, false) - 0.99005).abs() < 1e-5);
        assert!((chernoff_term(0.3, 10, ChernoffVariant::Third, true) - 0.36788).abs() < 1e-5);
        assert!(
            (chernoff_term(0.3, 10, ChernoffVariant::Half, false) - (-0.015f64).exp()).abs()
                < 1e-15
        );
        assert!(chernoff_term(0.3, 1 << 40, ChernoffVariant::Third, false) > 1.0 - 1e-12);
        assert_eq!(
            chernoff_term(0.3, 1 << 40, ChernoffVariant::Third, true),
            0.0
        );
    }

    #[test]
    fn literal_chernoff_makes_distribution_kinds_vacuous() {
        let inputs = BoundInputs {
            n: 50,
            eta: 4.0,
            m: Some(1.0),
            h_tau: Some(0.22),
            ..Default::default()
        };
        let r = deviation_bound(BoundKind::HoeffdingDistribution, &inputs).unwrap();
        assert!(r.vacuous);
        let c = deviation_bound(
            BoundKind::HoeffdingDistribution,
            &BoundInputs {
                corrected_chernoff: true,
                ..inputs
            },
        )
        .unwrap();
        assert!(!c.vacuous);
    }

    #[test]
    fn inversion_closed_forms() {
        let eta =
            invert_confidence(BoundKind::HoeffdingSimple, 0.05, &BoundInputs::default()).unwrap();
        assert!((eta - 90f64.ln()).abs() < 1e-12);
        assert!((eta - 4.49981).abs() < 1e-5);
        let eta = invert_confidence(BoundKind::HoeffdingEmpirical, 0.01, &BoundInputs::default())
            .unwrap();
        assert!((eta - 550f64.ln()).abs() < 1e-12);
        assert!((eta - 6.30992).abs() < 1e-5);
    }

    #[test]
    fn inversion_floor() {
        let inputs = BoundInputs {
            n: 100,
            h_tau: Some(0.22),
            ..Default::default()
        };
        let floor = chernoff_term(0.22, 100, ChernoffVariant::Third, false);
        assert!(matches!(
            invert_confidence(BoundKind::HoeffdingDistribution, floor * 0.99, &inputs),
            Err(Error::Unattainable { .. })
        ));
    }

    #[test]
    fn input_errors() {
        let mut inputs = simple_inputs();
        inputs.m = None;
        assert_eq!(
            deviation_bound(BoundKind::HoeffdingSimple, &inputs).unwrap_err(),
            Error::MissingInput("M")
        );
        let inputs = BoundInputs {
            h_hat_tau: Some(0.0),
            g_hat_tau: Some(0.5),
            m: Some(1.0),
            ..Default::default()
        };
        assert_eq!(
            deviation_bound(BoundKind::HoeffdingEmpirical, &inputs).unwrap_err(),
            Error::NonpositiveNormalizer("H_hat_tau")
        );
        let inputs = BoundInputs {
            n: 3,
            m: Some(1.0),
            h_tau: Some(0.5),
            sigma2: Some(0.1),
            ..Default::default()
        };
        assert_eq!(
            deviation_bound(BoundKind::BernsteinDistribution, &inputs).unwrap_err(),
            Error::TooFewSamples { n: 3, min: 4 }
        );
    }
}
