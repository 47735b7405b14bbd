//! File formats, the `ipcw` command line and parallel Monte Carlo
//! experiments built on [`ipcw_core`].
//!
//! Every experiment draws replication `r` of sample size `n` from the
//! stream `(n << 32) | r` of the scenario seed and folds results in
//! replication order, so reports do not depend on the worker count.

pub mod cli;
pub mod data;
pub mod engine;
mod error;
pub mod experiments;
pub mod function;
pub mod report;
pub mod stats;

pub use error::{HarnessError, Result};
