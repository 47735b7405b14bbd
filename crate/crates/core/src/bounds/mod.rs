//! Closed-form deviation bounds for the IPCW mean and the Kaplan–Meier
//! estimator of the censoring survival function.
//!
//! Every bound has the form `P(deviation >= threshold) <= c e^{-eta} + a`,
//! where `a` collects `eta`-free multiplicative-Chernoff terms.

mod calculator;
mod convert;
mod kind;

pub use calculator::{
    chernoff_term, deviation_bound, invert_confidence, BoundInputs, BoundResult, ChernoffVariant,
};
pub use convert::{eta_eps_convert, Conversion};
pub use kind::{BoundKind, Normalization, UnknownBoundKind};
