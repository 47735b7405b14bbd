use serde::{Deserialize, Serialize};

use crate::num::sqrt;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conversion {
    EtaToEps,
    EpsToEta,
}

/// Converts between the DKW exponent `2 eps^2 - D_o eps` and `eta`.
///
/// Plain: `eps = sqrt(eta/2 + (D_o/4)^2) + D_o/4`, `eta = 2 eps^2 - D_o eps`.
/// Halved: `eps/2 = sqrt(eta/2 + (D_o/4)^2) + D_o/4`,
/// `eta = eps^2/2 - D_o eps/2`.
pub fn eta_eps_convert(direction: Conversion, value: f64, d_o: f64, halved: bool) -> Result<f64> {
    if !(d_o.is_finite() && d_o >= 0.0) {
        return Err(Error::OutOfDomain {
            value: d_o,
            reason: "D_o must be nonnegative",
        });
    }
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::OutOfDomain {
            value,
            reason: "value must be positive",
        });
    }
    let q = d_o / 4.0;
    match direction {
        Conversion::EtaToEps => {
            let eps = sqrt(value / 2.0 + q * q) + q;
            Ok(if halved { 2.0 * eps } else { eps })
        }
        Conversion::EpsToEta => {
            // eps (2 eps - D_o), written as a product to limit cancellation
            let eps = if halved { value / 2.0 } else { value };
            if eps <= 2.0 * q {
                return Err(Error::OutOfDomain {
                    value,
                    reason: if halved {
                        "eps must exceed D_o"
                    } else {
                        "eps must exceed D_o / 2"
                    },
                });
            }
            Ok(eps * (2.0 * eps - d_o))
        }
    }
}
