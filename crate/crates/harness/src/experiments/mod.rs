//! Monte Carlo experiments over a [`ScenarioConfig`](ipcw_core::scenario::ScenarioConfig).

mod bias;
mod calibrate;
mod clt;
mod coverage;
mod erm;

pub use bias::{run_bias_demo, BiasReport, BiasSpec};
pub use calibrate::{calibrate_d_o, CalibrationCell, DoReport, DoSpec, ScenarioCalibration};
pub use clt::{run_clt_check, CltReport, CltSpec};
pub use coverage::{run_coverage, CoverageReport, CoverageRun, CoverageSpec};
pub use erm::{run_erm_consistency, ClassSpec, ConsistencyReport, ErmCell, ErmSpec, LossKind};

use ipcw_core::scenario::ScenarioConfig;

fn scenario_label(config: &ScenarioConfig) -> String {
    config.name.clone().unwrap_or_else(|| "unnamed".to_string())
}
