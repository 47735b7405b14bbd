use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ipcw::BoundedFunction;
use crate::num::{abs, ceil, ln};
use crate::{Error, Result};

/// Hypothesis class with an exact sup-norm net.
#[derive(Debug, Clone)]
pub enum FunctionClass {
    /// `f = c`, `c in [lo, hi]`.
    Constants { lo: f64, hi: f64 },
    /// `f(t) = a t` on `[0, tau]`, `a in [lo, hi]`.
    LinearInTime { lo: f64, hi: f64, tau: f64 },
    /// A user-supplied finite family; its own net at every radius.
    Finite(Vec<BoundedFunction>),
}

/// One element of a net. `parameter` is the constant or slope for the
/// parametric classes.
#[derive(Debug, Clone)]
pub struct NetPoint {
    pub parameter: Option<f64>,
    pub function: BoundedFunction,
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo <= hi {
        Ok(())
    } else {
        Err(Error::UnsupportedClass)
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            value: epsilon,
            reason: "net radius must be positive",
        })
    }
}

/// Number of radius-`epsilon` intervals needed to cover a segment of
/// length `width`.
fn interval_count(width: f64, epsilon: f64) -> usize {
    let k = ceil(width / (2.0 * epsilon) - 1e-12);
    if k < 1.0 {
        1
    } else {
        k as usize
    }
}

/// Midpoints of `k` equal cells of `[lo, hi]`.
fn centers(lo: f64, hi: f64, k: usize) -> impl Iterator<Item = f64> {
    (0..k).map(move |j| lo + (2 * j + 1) as f64 * (hi - lo) / (2 * k) as f64)
}

impl FunctionClass {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Constants { lo, hi } => check_interval(*lo, *hi),
            Self::LinearInTime { lo, hi, tau } => {
                check_interval(*lo, *hi)?;
                if tau.is_finite() && *tau > 0.0 {
                    Ok(())
                } else {
                    Err(Error::UnsupportedClass)
                }
            }
            Self::Finite(members) if members.is_empty() => Err(Error::EmptyNet),
            Self::Finite(_) => Ok(()),
        }
    }

    /// Uniform sup bound over the class.
    pub fn bound_m(&self) -> f64 {
        match self {
            Self::Constants { lo, hi } => abs(*lo).max(abs(*hi)),
            Self::LinearInTime { lo, hi, tau } => abs(*lo).max(abs(*hi)) * tau,
            Self::Finite(members) => members
                .iter()
                .map(BoundedFunction::bound_m)
                .fold(0.0, f64::max),
        }
    }

    /// Interval containing every value taken by a member.
    pub fn value_range(&self) -> (f64, f64) {
        match self {
            Self::Constants { lo, hi } => (*lo, *hi),
            Self::LinearInTime { lo, hi, tau } => ((lo * tau).min(0.0), (hi * tau).max(0.0)),
            Self::Finite(_) => {
                let m = self.bound_m();
                (-m, m)
            }
        }
    }

    /// `(a, p)` with `log N(F, eps) <= a eps^{-p}` for every `eps > 0`.
    pub fn covering_exponents(&self) -> (f64, f64) {
        match self {
            Self::Constants { lo, hi } => ((hi - lo) / 2.0, 1.0),
            Self::LinearInTime { lo, hi, tau } => ((hi - lo) * tau / 2.0, 1.0),
            Self::Finite(members) => (ln(members.len().max(1) as f64), 0.0),
        }
    }

    /// Member with parameter `theta` (parametric classes only).
    pub fn member(&self, theta: f64) -> Result<BoundedFunction> {
        match self {
            Self::Constants { lo, hi } if *lo <= theta && theta <= *hi => {
                Ok(BoundedFunction::constant(theta))
            }
            Self::LinearInTime { lo, hi, tau } if *lo <= theta && theta <= *hi => {
                let m = if theta != 0.0 { abs(theta) * tau } else { 1.0 };
                BoundedFunction::new(m, false, move |t, _| theta * t)
            }
            Self::Finite(_) => Err(Error::UnsupportedClass),
            _ => Err(Error::OutOfDomain {
                value: theta,
                reason: "parameter outside the class",
            }),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Constants { lo, hi } => format!("constants on [{lo}, {hi}]"),
            Self::LinearInTime { lo, hi, tau } => format!("a t on [0, {tau}], a in [{lo}, {hi}]"),
            Self::Finite(m) => format!("finite class of {} functions", m.len()),
        }
    }

    /// An `epsilon`-net in sup norm, in a fixed order.
    pub fn net(&self, epsilon: f64) -> Result<Vec<NetPoint>> {
        self.validate()?;
        let net: Vec<NetPoint> = match self {
            Self::Constants { lo, hi } => {
                check_epsilon(epsilon)?;
                let k = interval_count(hi - lo, epsilon);
                centers(*lo, *hi, k)
                    .map(|c| {
                        Ok(NetPoint {
                            parameter: Some(c),
                            function: self.member(c)?,
                        })
                    })
                    .collect::<Result<_>>()?
            }
            // sup_t |a t - a' t| = |a - a'| tau
            Self::LinearInTime { lo, hi, tau } => {
                check_epsilon(epsilon)?;
                let k = interval_count((hi - lo) * tau, epsilon);
                centers(*lo, *hi, k)
                    .map(|a| {
                        Ok(NetPoint {
                            parameter: Some(a),
                            function: self.member(a)?,
                        })
                    })
                    .collect::<Result<_>>()?
            }
            Self::Finite(members) => members
                .iter()
                .map(|f| NetPoint {
                    parameter: None,
                    function: f.clone(),
                })
                .collect(),
        };
        if net.is_empty() {
            return Err(Error::EmptyNet);
        }
        Ok(net)
    }
}

/// Size of the constructed `epsilon`-net.
pub fn covering_number(class: &FunctionClass, epsilon: f64) -> Result<usize> {
    class.validate()?;
    match class {
        FunctionClass::Constants { lo, hi } => {
            check_epsilon(epsilon)?;
            Ok(interval_count(hi - lo, epsilon))
        }
        FunctionClass::LinearInTime { lo, hi, tau } => {
            check_epsilon(epsilon)?;
            Ok(interval_count((hi - lo) * tau, epsilon))
        }
        FunctionClass::Finite(members) => Ok(members.len()),
    }
}
