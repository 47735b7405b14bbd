//! Command-line configuration and dispatch.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, ValueEnum};
use ipcw_core::bounds::{BoundInputs, BoundKind};
use ipcw_core::scenario::ScenarioConfig;

use crate::engine::default_workers;
use crate::error::{HarnessError, Result};
use crate::experiments::{BiasSpec, CltSpec, CoverageSpec, DoSpec, ErmSpec};
use crate::report::{run_spec, BoundSpec, EstimateSpec, ExperimentSpec, IdentitiesSpec, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// IPCW estimate, tails, plug-in variance and identities for a CSV sample.
    Estimate,
    /// Closed-form deviation bounds.
    Bound,
    /// Monte Carlo coverage of the bounds.
    Coverage,
    /// Variance and normality of sqrt(n)(mu_hat - mu).
    Clt,
    /// Naive versus IPCW bias.
    Bias,
    /// Smallest D_o consistent with simulations.
    CalibrateDo,
    /// Censored ERM: gap bound and consistency.
    Erm,
    /// Discrete identity suite for a CSV sample.
    Identities,
    /// Re-executes the configuration embedded in a report (`--config`).
    Rerun,
}

/// Optional flags; each command reads the ones it needs.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    #[arg(long)]
    pub tau: Option<f64>,
    /// Comma-separated list for the experiments.
    #[arg(long, value_delimiter = ',')]
    pub eta: Vec<f64>,
    #[arg(long = "Do")]
    pub d_o: Option<f64>,
    /// Bound kinds, comma-separated, or `all`.
    #[arg(long, value_delimiter = ',')]
    pub kind: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long = "R")]
    pub replications: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Function selector: t, const:<c>, indicator:<s>, poly:<c0>,..., t*z<k>.
    #[arg(long)]
    pub f: Option<String>,
    /// Class member selector for the class bounds (repeatable).
    #[arg(long)]
    pub class: Vec<String>,
    #[arg(long = "M")]
    pub m: Option<f64>,
    #[arg(long = "Htau")]
    pub h_tau: Option<f64>,
    /// Estimated censoring survival at tau.
    #[arg(long = "Gtau")]
    pub g_hat_tau: Option<f64>,
    #[arg(long = "Stau")]
    pub s_tau: Option<f64>,
    #[arg(long = "Hhat")]
    pub h_hat_tau: Option<f64>,
    #[arg(long = "Shat")]
    pub s_hat_tau: Option<f64>,
    #[arg(long)]
    pub sigma2: Option<f64>,
    #[arg(long)]
    pub class_size: Option<usize>,
    /// Confidence level; solves for eta (bound) or sets the ERM level.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Use e^{-n H/3} in place of e^{-H/(3n)}.
    #[arg(long)]
    pub corrected_chernoff: bool,
    #[arg(long)]
    pub population_constants: bool,
    /// ERM net radius.
    #[arg(long = "eps")]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub eps_tol: Option<f64>,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "ipcw",
    version,
    about = "IPCW estimation and concentration bounds for right-censored data"
)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// CSV sample with header u,delta,z1..zd[,y].
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Scenario JSON (repeatable for calibrate-do).
    #[arg(long)]
    pub scenario: Vec<PathBuf>,
    /// Full experiment configuration, or a report to re-run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Report destination; `-` writes to stdout.
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
    #[arg(long, env = "IPCW_WORKERS")]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub overrides: Overrides,
}

fn usage(message: impl Into<String>) -> HarnessError {
    HarnessError::Usage(message.into())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| HarnessError::Json {
        path: path.display().to_string(),
        source,
    })
}

fn parse_kinds(names: &[String]) -> Result<Vec<BoundKind>> {
    if names.is_empty() || names.iter().any(|k| k == "all") {
        return Ok(BoundKind::ALL.to_vec());
    }
    names
        .iter()
        .map(|k| k.parse::<BoundKind>().map_err(|e| usage(e.to_string())))
        .collect()
}

impl RunConfig {
    fn scenarios(&self, fallback: ScenarioConfig) -> Result<Vec<ScenarioConfig>> {
        let mut out: Vec<ScenarioConfig> = if self.scenario.is_empty() {
            vec![fallback]
        } else {
            self.scenario
                .iter()
                .map(|p| read_json(p))
                .collect::<Result<_>>()?
        };
        for s in &mut out {
            if let Some(tau) = self.overrides.tau {
                s.tau = tau;
            }
            if let Some(seed) = self.overrides.seed {
                s.seed = seed;
            }
            s.validate()?;
        }
        Ok(out)
    }

    fn scenario_one(&self, fallback: ScenarioConfig) -> Result<ScenarioConfig> {
        let mut all = self.scenarios(fallback)?;
        if all.len() != 1 {
            return Err(usage("this command takes a single --scenario"));
        }
        Ok(all.remove(0))
    }

    fn input(&self) -> Result<(PathBuf, f64)> {
        let input = self
            .input
            .clone()
            .ok_or_else(|| usage("--input is required"))?;
        let tau = self
            .overrides
            .tau
            .ok_or_else(|| usage("--tau is required"))?;
        Ok((input, tau))
    }

    fn single_n(&self, default: usize) -> Result<usize> {
        match self.overrides.n.as_slice() {
            [] => Ok(default),
            [n] => Ok(*n),
            _ => Err(usage("this command takes a single --n")),
        }
    }

    fn grid_or(&self, default: &[usize]) -> Vec<usize> {
        if self.overrides.n.is_empty() {
            default.to_vec()
        } else {
            self.overrides.n.clone()
        }
    }

    fn eta_grid(&self) -> Vec<f64> {
        if self.overrides.eta.is_empty() {
            vec![1.0, 2.0, 3.0, 4.0]
        } else {
            self.overrides.eta.clone()
        }
    }

    /// Builds the reproducible configuration from files, flags and defaults.
    pub fn resolve(&self) -> Result<ExperimentSpec> {
        let o = &self.overrides;
        let f = o.f.clone().unwrap_or_else(|| "t".into());
        if let Some(path) = &self.config {
            return match self.command {
                Command::Rerun => Ok(read_json::<Report>(path)?.config),
                _ => read_json(path),
            };
        }
        Ok(match self.command {
            Command::Rerun => return Err(usage("rerun needs --config <report.json>")),
            Command::Estimate => {
                let (input, tau) = self.input()?;
                ExperimentSpec::Estimate(EstimateSpec { input, tau, f })
            }
            Command::Identities => {
                let (input, tau) = self.input()?;
                ExperimentSpec::Identities(IdentitiesSpec { input, tau })
            }
            Command::Bound => {
                let eta = match (o.eta.as_slice(), o.delta) {
                    ([eta], None) => *eta,
                    ([], Some(_)) => 1.0,
                    ([], None) => return Err(usage("bound needs --eta or --delta")),
                    _ => return Err(usage("bound takes a single --eta, or --delta")),
                };
                let n = self.single_n(0)?;
                if n == 0 {
                    return Err(usage("bound needs --n"));
                }
                let inputs = BoundInputs {
                    n,
                    eta,
                    m: o.m,
                    d_o: o.d_o.unwrap_or(1.0),
                    h_tau: o.h_tau,
                    s_tau: o.s_tau,
                    h_hat_tau: o.h_hat_tau,
                    g_hat_tau: o.g_hat_tau,
                    s_hat_tau: o.s_hat_tau,
                    sigma2: o.sigma2,
                    class_size: o.class_size,
                    corrected_chernoff: o.corrected_chernoff,
                };
                ExperimentSpec::Bound(BoundSpec {
                    kinds: parse_kinds(&o.kind)?,
                    inputs,
                    delta: o.delta,
                })
            }
            Command::Coverage => {
                let scenario = self.scenario_one(ScenarioConfig::default_scenario())?;
                let mut spec = CoverageSpec::new(
                    scenario,
                    self.grid_or(&[50, 200]),
                    o.replications.unwrap_or(10_000),
                );
                spec.kinds = parse_kinds(&o.kind)?;
                spec.f = f;
                if !o.class.is_empty() {
                    spec.class = o.class.clone();
                }
                spec.eta_grid = self.eta_grid();
                spec.d_o = o.d_o.unwrap_or(1.0);
                spec.corrected_chernoff = o.corrected_chernoff;
                spec.population_constants = o.population_constants;
                ExperimentSpec::Coverage(spec)
            }
            Command::Clt => ExperimentSpec::Clt(CltSpec {
                scenario: self.scenario_one(ScenarioConfig::default_scenario())?,
                f,
                n: self.single_n(2000)?,
                replications: o.replications.unwrap_or(5000),
            }),
            Command::Bias => ExperimentSpec::Bias(BiasSpec {
                scenario: self.scenario_one(ScenarioConfig::default_scenario())?,
                f,
                n: self.single_n(500)?,
                replications: o.replications.unwrap_or(2000),
            }),
            Command::CalibrateDo => ExperimentSpec::CalibrateDo(DoSpec {
                scenarios: self.scenarios(ScenarioConfig::default_scenario())?,
                eta_grid: self.eta_grid(),
                n_grid: self.grid_or(&[50, 200]),
                replications: o.replications.unwrap_or(2000),
                tolerance: 1e-3,
                lower: 0.0,
                upper: 10.0,
            }),
            Command::Erm => {
                let mut spec = ErmSpec::default_with(
                    self.grid_or(&[100, 400, 1600]),
                    o.replications.unwrap_or(200),
                );
                spec.scenario = self.scenario_one(ScenarioConfig::default_erm_scenario())?;
                spec.epsilon = o.epsilon;
                spec.delta = o.delta.unwrap_or(spec.delta);
                spec.d_o = o.d_o.unwrap_or(spec.d_o);
                spec.eps_tol = o.eps_tol.unwrap_or(spec.eps_tol);
                ExperimentSpec::Erm(spec)
            }
        })
    }
}

/// Resolves, executes and writes the report; returns it as well.
pub fn run(config: &RunConfig) -> Result<Report> {
    let spec = config.resolve()?;
    let report = run_spec(&spec, config.workers.unwrap_or_else(default_workers))?;
    let text = serde_json::to_string_pretty(&report).expect("reports serialize");
    if config.out.as_os_str() == "-" {
        // a closed pipe (e.g. `| head`) is not an error
        let _ = writeln!(std::io::stdout().lock(), "{text}");
    } else {
        let mut file = fs::File::create(&config.out).map_err(|source| HarnessError::Io {
            path: config.out.clone(),
            source,
        })?;
        writeln!(file, "{text}").map_err(|source| HarnessError::Io {
            path: config.out.clone(),
            source,
        })?;
    }
    Ok(report)
}
