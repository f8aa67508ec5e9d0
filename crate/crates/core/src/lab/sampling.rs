use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Scenario;
use crate::actors::PrCoalition;
use crate::error::{Error, Result};

/// Draws allowed before giving up on a batch.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Open interval `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    fn draw(&self, rng: &mut impl Rng) -> Option<f64> {
        let x = rng.random_range(self.lo..self.hi);
        (x > self.lo).then_some(x)
    }
}

/// Independent box for each parameter. Draws are rejected until every model
/// constraint holds, so the box itself may overlap infeasible regions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingBounds {
    pub t_f: Interval,
    pub t_m: Interval,
    pub t_s: Interval,
    pub t_l: Interval,
    pub alpha: Interval,
}

impl Default for SamplingBounds {
    fn default() -> Self {
        SamplingBounds {
            t_f: Interval::new(0.0, 5.0),
            t_m: Interval::new(0.0, 10.0),
            t_s: Interval::new(0.0, 10.0),
            t_l: Interval::new(0.0, 20.0),
            alpha: Interval::new(0.0, 1.0),
        }
    }
}

impl SamplingBounds {
    fn validate(&self) -> Result<()> {
        let named = [("t_f", self.t_f), ("t_m", self.t_m), ("t_s", self.t_s), ("t_l", self.t_l), ("alpha", self.alpha)];
        for (name, iv) in named {
            if !(iv.lo.is_finite() && iv.hi.is_finite() && iv.lo < iv.hi) {
                return Err(Error::Bounds(format!("{name} needs finite lo < hi, got ({}, {})", iv.lo, iv.hi)));
            }
            if iv.lo < 0.0 {
                return Err(Error::Bounds(format!("{name} lower bound {} is negative", iv.lo)));
            }
        }
        if self.alpha.hi > 1.0 {
            return Err(Error::Bounds(format!("alpha upper bound {} exceeds 1", self.alpha.hi)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledScenarios {
    pub scenarios: Vec<Scenario>,
    /// Total draws, accepted plus rejected.
    pub draws: u64,
}

impl SampledScenarios {
    pub fn rejected(&self) -> u64 {
        self.draws - self.scenarios.len() as u64
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.scenarios.len() as f64 / self.draws as f64
    }
}

/// `n` valid PR scenarios by rejection sampling, reproducible from `seed`.
pub fn random_scenarios(seed: u64, n: usize, bounds: &SamplingBounds, budget: u64) -> Result<SampledScenarios> {
    if n == 0 {
        return Err(Error::Bounds("scenario count must be at least 1".into()));
    }
    bounds.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scenarios = Vec::with_capacity(n);
    let mut draws = 0u64;
    while scenarios.len() < n {
        if draws >= budget {
            return Err(Error::BudgetExhausted { wanted: n, accepted: scenarios.len(), draws });
        }
        draws += 1;
        // draw all five every time so the stream position does not depend on
        // which check failed
        let sample = [bounds.t_f, bounds.t_m, bounds.t_s, bounds.t_l, bounds.alpha].map(|iv| iv.draw(&mut rng));
        let [Some(t_f), Some(t_m), Some(t_s), Some(t_l), Some(alpha)] = sample else {
            continue;
        };
        let tag = format!("seed{seed}#{}", scenarios.len());
        let Ok(coalition) = PrCoalition::new(t_l, t_s, alpha) else {
            continue;
        };
        if !(t_f > 0.0) {
            continue;
        }
        if let Ok(s) = Scenario::new(t_m, t_f, Some(coalition), tag) {
            scenarios.push(s);
        }
    }
    Ok(SampledScenarios { scenarios, draws })
}
