use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::num::abs;

/// Anything that can be evaluated right-continuously with left limits.
pub trait SurvivalFunction {
    fn eval(&self, t: f64) -> f64;
    fn left_limit(&self, t: f64) -> f64;
}

/// Right-continuous piecewise-constant function.
///
/// `eval(t)` is the value after the last jump `<= t`; `left_limit(t)` the
/// value after the last jump strictly before `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepCurve {
    jump_times: Vec<f64>,
    values: Vec<f64>,
    initial_value: f64,
}

impl StepCurve {
    /// Panics if the jump times are not strictly increasing or the lengths differ.
    pub fn new(initial_value: f64, jump_times: Vec<f64>, values: Vec<f64>) -> Self {
        assert_eq!(jump_times.len(), values.len(), "one value per jump");
        assert!(
            jump_times.windows(2).all(|w| w[0] < w[1]),
            "jump times must be strictly increasing"
        );
        Self {
            jump_times,
            values,
            initial_value,
        }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(value, Vec::new(), Vec::new())
    }

    pub fn initial_value(&self) -> f64 {
        self.initial_value
    }

    pub fn jump_times(&self) -> &[f64] {
        &self.jump_times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(t, value before, value after)` per jump.
    pub fn jumps(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.jump_times.iter().enumerate().map(move |(i, &t)| {
            let before = if i == 0 {
                self.initial_value
            } else {
                self.values[i - 1]
            };
            (t, before, self.values[i])
        })
    }

    fn value_before_index(&self, idx: usize) -> f64 {
        if idx == 0 {
            self.initial_value
        } else {
            self.values[idx - 1]
        }
    }
}

impl SurvivalFunction for StepCurve {
    fn eval(&self, t: f64) -> f64 {
        self.value_before_index(self.jump_times.partition_point(|&x| x <= t))
    }

    fn left_limit(&self, t: f64) -> f64 {
        self.value_before_index(self.jump_times.partition_point(|&x| x < t))
    }
}

/// `sup_{0 < t <= horizon} |a(t-) - b(t-)|`, computed exactly by enumerating
/// the jump points of `a` below `horizon`. `b` must be monotone.
pub fn sup_distance(a: &StepCurve, b: &impl SurvivalFunction, horizon: f64) -> f64 {
    // The supremum of left-limit gaps over (0, h] equals the supremum of
    // value gaps over [0, h). On each constant stretch [s, e) of `a` the gap
    // to a monotone `b` peaks at b(s) or b(e-).
    let mut best: f64 = 0.0;
    let mut start = 0.0;
    for &t in a.jump_times().iter().take_while(|&&t| t < horizon) {
        if t > start {
            let v = a.eval(start);
            best = best
                .max(abs(v - b.eval(start)))
                .max(abs(v - b.left_limit(t)));
        }
        start = t;
    }
    if horizon > start {
        let v = a.eval(start);
        best = best
            .max(abs(v - b.eval(start)))
            .max(abs(v - b.left_limit(horizon)));
    }
    best
}
