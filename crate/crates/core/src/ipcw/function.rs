use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::num::abs;
use crate::{Error, Result};

type Evaluator = Arc<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;

/// A map `(t, z) -> f(t, z)` with a declared sup bound `M`.
///
/// `breakpoints` lists times where `f` may jump in `t`; quadrature routines
/// split their panels there.
#[derive(Clone)]
pub struct BoundedFunction {
    evaluator: Evaluator,
    bound_m: f64,
    depends_on_z: bool,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for BoundedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundedFunction")
            .field("bound_m", &self.bound_m)
            .field("depends_on_z", &self.depends_on_z)
            .field("breakpoints", &self.breakpoints)
            .finish_non_exhaustive()
    }
}

impl BoundedFunction {
    pub fn new(
        bound_m: f64,
        depends_on_z: bool,
        evaluator: impl Fn(f64, &[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(bound_m.is_finite() && bound_m > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "bound M must be positive and finite, got {bound_m}"
            )));
        }
        Ok(Self {
            evaluator: Arc::new(evaluator),
            bound_m,
            depends_on_z,
            breakpoints: Vec::new(),
        })
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    /// `f(t) = t` on `[0, tau]`.
    pub fn time(tau: f64) -> Self {
        Self::new(tau, false, |t, _| t).expect("tau > 0")
    }

    /// `f(t) = 1{t >= s}`.
    pub fn indicator(s: f64) -> Self {
        Self::new(1.0, false, move |t, _| if t >= s { 1.0 } else { 0.0 })
            .expect("positive bound")
            .with_breakpoints(vec![s])
    }

    /// `f(t) = sum_k c_k t^k` with `M = sum_k |c_k| tau^k`.
    pub fn polynomial(coefficients: Vec<f64>, tau: f64) -> Self {
        let mut m = 0.0;
        let mut p = 1.0;
        for c in &coefficients {
            m += abs(*c) * p;
            p *= tau;
        }
        let m = if m > 0.0 { m } else { 1.0 };
        Self::new(m, false, move |t, _| {
            coefficients.iter().rev().fold(0.0, |acc, c| acc * t + c)
        })
        .expect("positive bound")
    }

    /// `f(t, z) = t z_k` for covariates in `[0, 1]`.
    pub fn time_times_covariate(k: usize, tau: f64) -> Self {
        Self::new(tau, true, move |t, z| t * z[k]).expect("tau > 0")
    }

    pub fn constant(c: f64) -> Self {
        let m = if abs(c) > 0.0 { abs(c) } else { 1.0 };
        Self::new(m, false, move |_, _| c).expect("positive bound")
    }

    /// `a f + b g`, bound `|a| M_f + |b| M_g`.
    pub fn linear_combination(a: f64, f: &Self, b: f64, g: &Self) -> Self {
        let (f2, g2) = (f.clone(), g.clone());
        let m = abs(a) * f.bound_m + abs(b) * g.bound_m;
        let mut breaks = f.breakpoints.clone();
        breaks.extend_from_slice(&g.breakpoints);
        Self::new(
            if m > 0.0 { m } else { 1.0 },
            f.depends_on_z || g.depends_on_z,
            move |t, z| a * f2.eval(t, z) + b * g2.eval(t, z),
        )
        .expect("positive bound")
        .with_breakpoints(breaks)
    }

    pub fn bound_m(&self) -> f64 {
        self.bound_m
    }

    pub fn depends_on_z(&self) -> bool {
        self.depends_on_z
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn eval(&self, t: f64, z: &[f64]) -> f64 {
        (self.evaluator)(t, z)
    }

    /// Evaluates and enforces `|f| <= M`.
    pub fn eval_checked(&self, t: f64, z: &[f64]) -> Result<f64> {
        let v = self.eval(t, z);
        if !v.is_finite() || abs(v) > self.bound_m * (1.0 + 1e-12) {
            return Err(Error::BoundViolation {
                value: v,
                bound: self.bound_m,
            });
        }
        Ok(v)
    }
}
