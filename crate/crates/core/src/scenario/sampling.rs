use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ScenarioConfig;
use crate::survival::{CensoredObservation, CensoredSample};
use crate::Result;

pub type ScenarioRng = ChaCha8Rng;

/// Counter-based stream keyed by `(seed, stream)`; independent of any
/// other stream and of scheduling.
pub fn scenario_rng(seed: u64, stream: u64) -> ScenarioRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One complete (uncensored) draw of `(T, Z, Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullDraw {
    pub t: f64,
    pub z: Vec<f64>,
    pub y: Option<f64>,
}

pub fn draw_uncensored(config: &ScenarioConfig, rng: &mut ScenarioRng) -> FullDraw {
    let t = config
        .failure_model
        .draw(|| rng.random::<f64>())
        .min(config.tau);
    let z: Vec<f64> = (0..config.covariate_dim)
        .map(|_| rng.random::<f64>())
        .collect();
    let y = config
        .response_model
        .as_ref()
        .map(|r| r.draw(t, &z, || rng.random::<f64>()));
    FullDraw { t, z, y }
}

/// Draws `n` censored observations from stream `stream` of the scenario.
///
/// Per observation the draw order is `T*`, `C`, `Z`, noise. A float tie
/// `T == C` is recorded as a failure; the sample's tie flag reports it.
pub fn sample_scenario(config: &ScenarioConfig, n: usize, stream: u64) -> Result<CensoredSample> {
    config.validate()?;
    let mut rng = scenario_rng(config.seed, stream);
    let mut obs = Vec::with_capacity(n);
    for _ in 0..n {
        let t = config
            .failure_model
            .draw(|| rng.random::<f64>())
            .min(config.tau);
        let c = config.censoring_model.draw(|| rng.random::<f64>());
        let z: Vec<f64> = (0..config.covariate_dim)
            .map(|_| rng.random::<f64>())
            .collect();
        let y = config
            .response_model
            .as_ref()
            .map(|r| r.draw(t, &z, || rng.random::<f64>()));
        let delta = t <= c;
        obs.push(CensoredObservation {
            u: if delta { t } else { c },
            delta,
            z,
            y,
        });
    }
    CensoredSample::new(obs, config.tau)
}
