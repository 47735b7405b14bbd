//! Inverse-probability-of-censoring weighted means.

mod estimator;
mod function;
mod variance;

pub use estimator::{
    ipcw_mean, ipcw_mean_with, ipcw_weights, km_functional_mean, naive_mean, EstimateResult,
    IpcwOptions, IpcwWeights,
};
pub use function::BoundedFunction;
pub use variance::{
    sigma_f_oracle, sigma_f_oracle_with, sigma_f_plugin, sigma_f_plugin_with, SigmaForm,
    VarianceResult,
};
