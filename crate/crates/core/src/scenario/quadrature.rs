use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{scenario_rng, ScenarioConfig};
use crate::ipcw::BoundedFunction;
use crate::num::{gl4, GL8};

/// Base number of equal-width panels on `[0, tau]`; 4 Gauss nodes each.
pub(crate) const BASE_PANELS: usize = 512;
const MC_COVARIATE_DRAWS: usize = 4096;
const COVARIATE_STREAM: u64 = u64::MAX - 1;

/// Partition of `[0, tau]` refined at every point where the law of `T` or
/// the integrand may be discontinuous, plus the atoms of `T`.
#[derive(Debug, Clone)]
pub(crate) struct TimePanels {
    pub edges: Vec<f64>,
    pub atoms: Vec<(f64, f64)>,
}

impl TimePanels {
    pub fn new(config: &ScenarioConfig, extra_breaks: &[f64]) -> Self {
        let tau = config.tau;
        let mut star_atoms = Vec::new();
        config.failure_model.atoms(&mut star_atoms, 1.0);
        let mut atoms: Vec<(f64, f64)> = star_atoms
            .iter()
            .copied()
            .filter(|&(a, _)| a < tau)
            .collect();
        atoms.push((tau, config.failure_model.prob_at_least(tau)));
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut edges: Vec<f64> = (0..=BASE_PANELS)
            .map(|k| tau * k as f64 / BASE_PANELS as f64)
            .collect();
        let mut breaks = Vec::new();
        config.failure_model.density_breaks(&mut breaks);
        breaks.extend(atoms.iter().map(|a| a.0));
        breaks.extend_from_slice(extra_breaks);
        edges.extend(breaks.into_iter().filter(|&b| b > 0.0 && b < tau));
        edges.sort_by(f64::total_cmp);
        edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * tau);
        edges[0] = 0.0;
        let last = edges.len() - 1;
        edges[last] = tau;
        Self { edges, atoms }
    }

    pub fn panels(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.edges.windows(2).map(|w| (w[0], w[1]))
    }

    /// `E g(T)` under the truncated failure law.
    pub fn expect(&self, config: &ScenarioConfig, mut g: impl FnMut(f64) -> f64) -> f64 {
        let cont: f64 = self
            .panels()
            .map(|(a, b)| gl4(a, b, |t| g(t) * config.failure_model.density(t)))
            .sum();
        cont + self.atoms.iter().map(|&(a, m)| g(a) * m).sum::<f64>()
    }
}

/// Weighted nodes representing `Z ~ U[0,1]^d`: a tensor Gauss–Legendre rule
/// for `d <= 3`, otherwise a seeded Monte Carlo design.
#[derive(Debug, Clone)]
pub(crate) struct CovariateDesign {
    pub nodes: Vec<(Vec<f64>, f64)>,
}

impl CovariateDesign {
    pub fn new(config: &ScenarioConfig, depends_on_z: bool) -> Self {
        let d = config.covariate_dim;
        if !depends_on_z || d == 0 {
            return Self {
                nodes: vec![(vec![0.5; d], 1.0)],
            };
        }
        if d <= 3 {
            let mut nodes = vec![(Vec::new(), 1.0)];
            for _ in 0..d {
                let mut next = Vec::with_capacity(nodes.len() * GL8.len());
                for (z, w) in &nodes {
                    for &(x, wx) in &GL8 {
                        let mut z2: Vec<f64> = z.clone();
                        z2.push(0.5 + 0.5 * x);
                        next.push((z2, w * 0.5 * wx));
                    }
                }
                nodes = next;
            }
            Self { nodes }
        } else {
            let mut rng = scenario_rng(config.seed, COVARIATE_STREAM);
            let w = 1.0 / MC_COVARIATE_DRAWS as f64;
            let nodes = (0..MC_COVARIATE_DRAWS)
                .map(|_| ((0..d).map(|_| rng.random::<f64>()).collect(), w))
                .collect();
            Self { nodes }
        }
    }

    pub fn expect(&self, mut g: impl FnMut(&[f64]) -> f64) -> f64 {
        self.nodes.iter().map(|(z, w)| w * g(z)).sum()
    }
}

impl ScenarioConfig {
    /// `mu(f) = E f(T, Z)` by quadrature over the law of `T` and the
    /// covariate design.
    pub fn true_mean(&self, f: &BoundedFunction) -> f64 {
        let panels = TimePanels::new(self, f.breakpoints());
        let design = CovariateDesign::new(self, f.depends_on_z());
        panels.expect(self, |t| design.expect(|z| f.eval(t, z)))
    }
}
