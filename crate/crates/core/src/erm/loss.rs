use alloc::format;
use alloc::sync::Arc;
use core::fmt;

use rand::Rng;

use crate::num::abs;
use crate::scenario::scenario_rng;
use crate::{Error, Result};

type LossFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

const GRID: usize = 17;
const LIPSCHITZ_PROBES: usize = 512;
const PROBE_SEED: u64 = 0x1055;

/// Rectangle of `(y, s)` pairs on which a loss is checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossDomain {
    pub y: (f64, f64),
    pub s: (f64, f64),
}

impl LossDomain {
    pub fn unit() -> Self {
        Self {
            y: (0.0, 1.0),
            s: (0.0, 1.0),
        }
    }
}

/// A nonnegative loss `L(y, s)` with declared uniform bound `B` and
/// Lipschitz constant `L_M` in `s`.
#[derive(Clone)]
pub struct LossSpec {
    loss: LossFn,
    bound_b: f64,
    lipschitz: f64,
}

impl fmt::Debug for LossSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LossSpec")
            .field("bound_b", &self.bound_b)
            .field("lipschitz", &self.lipschitz)
            .finish_non_exhaustive()
    }
}

fn lerp(range: (f64, f64), x: f64) -> f64 {
    range.0 + (range.1 - range.0) * x
}

impl LossSpec {
    /// Builds the loss and spot-checks `0 <= L <= B` on a grid over `domain`
    /// and the Lipschitz condition on random triples `(y, s, s')`.
    pub fn new(
        bound_b: f64,
        lipschitz: f64,
        domain: LossDomain,
        loss: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(bound_b.is_finite() && bound_b > 0.0) {
            return Err(Error::InvalidLoss(format!(
                "B must be positive, got {bound_b}"
            )));
        }
        if !(lipschitz.is_finite() && lipschitz > 0.0) {
            return Err(Error::InvalidLoss(format!(
                "L_M must be positive, got {lipschitz}"
            )));
        }
        for r in [domain.y, domain.s] {
            if !(r.0.is_finite() && r.1.is_finite() && r.0 <= r.1) {
                return Err(Error::InvalidLoss(format!(
                    "invalid probe range [{}, {}]",
                    r.0, r.1
                )));
            }
        }
        let spec = Self {
            loss: Arc::new(loss),
            bound_b,
            lipschitz,
        };
        spec.spot_check(domain)?;
        Ok(spec)
    }

    /// `(y - s)^2` with the smallest valid `B` and `L_M` on `domain`.
    pub fn squared(domain: LossDomain) -> Result<Self> {
        let gap = (domain.y.1 - domain.s.0)
            .max(domain.s.1 - domain.y.0)
            .max(0.0);
        let b = if gap > 0.0 { gap * gap } else { 1.0 };
        let l = if gap > 0.0 { 2.0 * gap } else { 1.0 };
        Self::new(b, l, domain, |y, s| (y - s) * (y - s))
    }

    fn spot_check(&self, domain: LossDomain) -> Result<()> {
        let slack = 1e-12;
        for i in 0..GRID {
            for j in 0..GRID {
                let y = lerp(domain.y, i as f64 / (GRID - 1) as f64);
                let s = lerp(domain.s, j as f64 / (GRID - 1) as f64);
                let v = self.eval(y, s);
                if !(v >= 0.0 && v <= self.bound_b * (1.0 + slack)) {
                    return Err(Error::InvalidLoss(format!(
                        "L({y}, {s}) = {v} outside [0, B = {}]",
                        self.bound_b
                    )));
                }
            }
        }
        let mut rng = scenario_rng(PROBE_SEED, 0);
        for _ in 0..LIPSCHITZ_PROBES {
            let y = lerp(domain.y, rng.random());
            let s = lerp(domain.s, rng.random());
            let s2 = lerp(domain.s, rng.random());
            let lhs = abs(self.eval(y, s) - self.eval(y, s2));
            if lhs > self.lipschitz * abs(s - s2) * (1.0 + slack) + slack {
                return Err(Error::InvalidLoss(format!(
                    "Lipschitz check failed at y={y}, s={s}, s'={s2}: {lhs} > {} |s - s'|",
                    self.lipschitz
                )));
            }
        }
        Ok(())
    }

    pub fn eval(&self, y: f64, s: f64) -> f64 {
        (self.loss)(y, s)
    }

    pub fn bound_b(&self) -> f64 {
        self.bound_b
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// `c L` with constants `c B`, `c L_M`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidLoss(format!(
                "scale must be positive, got {c}"
            )));
        }
        let inner = self.loss.clone();
        Ok(Self {
            loss: Arc::new(move |y, s| c * inner(y, s)),
            bound_b: c * self.bound_b,
            lipschitz: c * self.lipschitz,
        })
    }
}
