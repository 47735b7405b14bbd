//! Estimation and finite-sample guarantees for means of right-censored data.
//!
//! The crate is `no_std` and needs only `alloc`. It provides:
//!
//! - [`survival`]: censored samples, Kaplan–Meier and Nelson–Aalen curves and
//!   the exact discrete identities linking them;
//! - [`ipcw`]: the inverse-probability-of-censoring weighted mean, its
//!   Kaplan–Meier functional form, the naive estimator and the asymptotic
//!   variance;
//! - [`bounds`]: closed-form Hoeffding, DKW–KM, class and Bernstein-type
//!   deviation bounds;
//! - [`scenario`]: generative models with closed-form truth and seeded
//!   sampling;
//! - [`erm`]: empirical risk minimization under censoring with exact
//!   sup-norm nets and the oracle gap bound.
//!
//! IO, the CLI and the parallel replication engine live in `ipcw-harness`.

#![no_std]

extern crate alloc;

pub mod bounds;
pub mod erm;
mod error;
pub mod ipcw;
pub mod num;
pub mod scenario;
pub mod survival;

pub use error::{Error, Result};
