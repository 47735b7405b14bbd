//! Empirical risk minimization with IPCW-weighted risks.
//!
//! Classes come with exact sup-norm nets, so the covering number entering
//! the oracle gap bound is computable.

mod class;
mod loss;
mod minimize;
mod oracle;

pub use class::{covering_number, FunctionClass, NetPoint};
pub use loss::{LossDomain, LossSpec};
pub use minimize::{censored_erm, empirical_risks, uncensored_erm, ErmResult};
pub use oracle::{
    oracle_gap_bound, risk_oracle, risk_oracle_many, GapBound, RiskEstimate, ORACLE_DRAWS,
};
