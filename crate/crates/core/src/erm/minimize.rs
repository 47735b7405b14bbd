use alloc::vec::Vec;

use super::{FunctionClass, LossSpec, NetPoint};
use crate::survival::{km_fit, CensoredObservation, CensoredSample, SurvivalFunction, Target};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct ErmResult {
    pub minimizer: NetPoint,
    /// IPCW empirical risk at the minimizer.
    pub empirical_risk: f64,
    /// Position of the minimizer in the net.
    pub argmin_index: usize,
    pub net_size: usize,
}

fn responses(sample: &CensoredSample) -> Result<Vec<f64>> {
    sample
        .observations()
        .iter()
        .enumerate()
        .map(|(index, o)| o.y.ok_or(Error::MissingResponse { index }))
        .collect()
}

/// `(index, G(u-))` for every uncensored observation.
fn censoring_denominators(sample: &CensoredSample) -> Result<Vec<(usize, f64)>> {
    let g = km_fit(sample, Target::Censoring);
    let mut out = Vec::with_capacity(sample.failures());
    for (index, o) in sample
        .observations()
        .iter()
        .enumerate()
        .filter(|(_, o)| o.delta)
    {
        let d = g.left_limit(o.u);
        if d <= 0.0 {
            return Err(Error::ZeroDenominator { index });
        }
        out.push((index, d));
    }
    Ok(out)
}

fn risk_of(
    obs: &[CensoredObservation],
    y: &[f64],
    terms: &[(usize, f64)],
    n: usize,
    point: &NetPoint,
    loss: &LossSpec,
) -> f64 {
    let mut sum = 0.0;
    for &(i, d) in terms {
        sum += loss.eval(y[i], point.function.eval(obs[i].u, &obs[i].z)) / d;
    }
    sum / n as f64
}

/// IPCW empirical risk `n^-1 sum_i delta_i L(y_i, f(u_i, z_i)) / G(u_i-)`
/// of each net point.
pub fn empirical_risks(
    sample: &CensoredSample,
    net: &[NetPoint],
    loss: &LossSpec,
) -> Result<Vec<f64>> {
    let y = responses(sample)?;
    let terms = censoring_denominators(sample)?;
    let obs = sample.observations();
    Ok(net
        .iter()
        .map(|p| risk_of(obs, &y, &terms, sample.len(), p, loss))
        .collect())
}

fn argmin(risks: &[f64]) -> usize {
    let mut best = 0;
    for (i, r) in risks.iter().enumerate().skip(1) {
        if *r < risks[best] {
            best = i;
        }
    }
    best
}

fn select(mut net: Vec<NetPoint>, risks: &[f64]) -> ErmResult {
    let argmin_index = argmin(risks);
    let net_size = net.len();
    ErmResult {
        empirical_risk: risks[argmin_index],
        argmin_index,
        net_size,
        minimizer: net.swap_remove(argmin_index),
    }
}

/// Minimizes the IPCW empirical risk over the `epsilon`-net of `class`.
/// Ties go to the smallest index.
pub fn censored_erm(
    sample: &CensoredSample,
    class: &FunctionClass,
    loss: &LossSpec,
    epsilon: f64,
) -> Result<ErmResult> {
    let net = class.net(epsilon)?;
    let risks = empirical_risks(sample, &net, loss)?;
    Ok(select(net, &risks))
}

/// Full-data ERM: every `u_i` is treated as the failure time, censoring
/// indicators are ignored.
pub fn uncensored_erm(
    sample: &CensoredSample,
    class: &FunctionClass,
    loss: &LossSpec,
    epsilon: f64,
) -> Result<ErmResult> {
    let net = class.net(epsilon)?;
    let y = responses(sample)?;
    let terms: Vec<(usize, f64)> = (0..sample.len()).map(|i| (i, 1.0)).collect();
    let obs = sample.observations();
    let risks: Vec<f64> = net
        .iter()
        .map(|p| risk_of(obs, &y, &terms, sample.len(), p, loss))
        .collect();
    Ok(select(net, &risks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::erm::LossDomain;
    use crate::ipcw::BoundedFunction;
    use alloc::vec;

    fn obs(u: f64, delta: bool, y: f64) -> CensoredObservation {
        CensoredObservation::new(u, delta).with_response(y)
    }

    fn three_constants() -> FunctionClass {
        FunctionClass::Finite(vec![
            BoundedFunction::constant(0.0),
            BoundedFunction::constant(0.5),
            BoundedFunction::constant(1.0),
        ])
    }

    #[test]
    fn exact_fit() {
        let s = CensoredSample::new(
            (1..=5).map(|i| obs(i as f64 / 10.0, true, 0.5)).collect(),
            1.0,
        )
        .unwrap();
        let loss = LossSpec::squared(LossDomain::unit()).unwrap();
        let r = censored_erm(&s, &three_constants(), &loss, 0.1).unwrap();
        assert_eq!(r.argmin_index, 1);
        assert_eq!(r.empirical_risk, 0.0);
        assert_eq!(r.net_size, 3);
    }

    #[test]
    fn ties_pick_first() {
        let s = CensoredSample::new(vec![obs(0.2, true, 0.25), obs(0.4, true, 0.75)], 1.0).unwrap();
        let loss = LossSpec::squared(LossDomain::unit()).unwrap();
        let class = FunctionClass::Finite(vec![
            BoundedFunction::constant(0.25),
            BoundedFunction::constant(0.75),
        ]);
        assert_eq!(
            censored_erm(&s, &class, &loss, 0.1).unwrap().argmin_index,
            0
        );
    }

    #[test]
    fn censoring_reweights() {
        // G(u-) = 1, 1, 1/2 at the failures 0.1, 0.2, 0.4 (censoring at 0.3)
        let s = CensoredSample::new(
            vec![
                obs(0.1, true, 0.0),
                obs(0.2, true, 0.0),
                obs(0.3, false, 0.0),
                obs(0.4, true, 1.0),
            ],
            1.0,
        )
        .unwrap();
        let loss = LossSpec::squared(LossDomain::unit()).unwrap();
        let net = three_constants().net(0.1).unwrap();
        let risks = empirical_risks(&s, &net, &loss).unwrap();
        // f = 0: (0 + 0 + 1/0.5) / 4
        assert!((risks[0] - 0.5).abs() < 1e-15);
        assert!((risks[1] - (0.25 + 0.25 + 0.25 / 0.5) / 4.0).abs() < 1e-15);
        assert!((risks[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn missing_response() {
        let s = CensoredSample::new(
            vec![obs(0.2, true, 0.0), CensoredObservation::new(0.3, true)],
            1.0,
        )
        .unwrap();
        let loss = LossSpec::squared(LossDomain::unit()).unwrap();
        assert_eq!(
            censored_erm(&s, &three_constants(), &loss, 0.1).unwrap_err(),
            Error::MissingResponse { index: 1 }
        );
    }
}
