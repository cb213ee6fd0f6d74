use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::BanditInstance;
use crate::rng::stream;
use crate::trace::{PolicyTrace, TraceStep};

/// Weights are rescaled by their maximum once it exceeds this value.
pub const RENORMALIZE_ABOVE: f64 = 1e100;

/// Exponential weights with uniform mixing rate `gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct Exp3State {
    weights: Vec<f64>,
    gamma: f64,
}

impl Exp3State {
    /// All weights start at 1.
    pub fn new(arms: usize, gamma: f64) -> Result<Self> {
        Self::with_weights(vec![1.0; arms], gamma)
    }

    pub fn with_weights(weights: Vec<f64>, gamma: f64) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidExp3(format!("need at least 2 arms, got {}", weights.len())));
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::InvalidExp3(format!("gamma {gamma} outside (0, 1]")));
        }
        if let Some(k) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidExp3(format!("weight {} of arm {k} is not positive and finite", weights[k])));
        }
        Ok(Self { weights, gamma })
    }

    pub fn arms(&self) -> usize {
        self.weights.len()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Smallest probability any arm can receive, `gamma / K`.
    pub fn floor(&self) -> f64 {
        self.gamma / self.arms() as f64
    }

    /// `p_k = (1 - gamma) w_k / sum_s w_s + gamma / K`.
    pub fn distribution(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.arms()];
        self.distribution_into(&mut p);
        p
    }

    pub fn distribution_into(&self, out: &mut [f64]) {
        let total: f64 = self.weights.iter().sum();
        let floor = self.floor();
        let scale = (1.0 - self.gamma) / total;
        for (p, &w) in out.iter_mut().zip(&self.weights) {
            *p = scale * w + floor;
        }
    }

    /// Importance-weighted update of the pulled arm:
    /// `w_arm *= exp(gamma * (reward / prob) / K)`.
    pub fn update(&mut self, arm: usize, reward: f64, prob: f64) -> Result<()> {
        if arm >= self.arms() {
            return Err(Error::ArmOutOfRange { arm, arms: self.arms() });
        }
        if !(0.0..=1.0).contains(&reward) {
            return Err(Error::RewardOutOfRange(reward));
        }
        let floor = self.floor();
        if !(prob >= floor && prob <= 1.0) {
            return Err(Error::InvalidProbability { prob, floor });
        }
        let estimate = reward / prob;
        self.weights[arm] *= (self.gamma * estimate / self.arms() as f64).exp();
        if self.weights[arm] > RENORMALIZE_ABOVE {
            let max = self.weights[arm];
            for w in &mut self.weights {
                // Arms far below the leader may flush to the smallest positive value.
                *w = (*w / max).max(f64::MIN_POSITIVE);
            }
        }
        Ok(())
    }
}

/// Index `k` with `u < p_0 + ... + p_k`; the last arm absorbs rounding.
fn inverse_cdf(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (k, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return k;
        }
    }
    probs.len() - 1
}

/// Runs a fresh EXP3 over 0-based periods `start..start + length`.
///
/// Each period consumes one uniform for the arm draw, then the reward
/// family's draw.
pub fn exp3_run<R: Rng + ?Sized>(
    instance: &BanditInstance,
    start: usize,
    length: usize,
    gamma: f64,
    rng: &mut R,
) -> Result<Vec<TraceStep>> {
    let horizon = instance.horizon();
    if length == 0 || start.checked_add(length).is_none_or(|end| end > horizon) {
        return Err(Error::HorizonOverrun { start, length, horizon });
    }
    let means = instance.means();
    let family = instance.family();
    let mut state = Exp3State::new(instance.arms(), gamma)?;
    let mut probs = vec![0.0; instance.arms()];
    let mut steps = Vec::with_capacity(length);
    for t in start..start + length {
        state.distribution_into(&mut probs);
        let arm = inverse_cdf(&probs, rng.random::<f64>());
        let prob = probs[arm];
        let mean = means.get(t, arm);
        let reward = family.sample(mean, rng);
        state.update(arm, reward, prob)?;
        steps.push(TraceStep { arm, prob, reward, mean });
    }
    Ok(steps)
}

/// One EXP3 run over the whole horizon from `seed`.
pub fn exp3_trace(instance: &BanditInstance, gamma: f64, seed: u64) -> Result<PolicyTrace> {
    let mut rng = stream(seed);
    let steps = exp3_run(instance, 0, instance.horizon(), gamma, &mut rng)?;
    Ok(PolicyTrace::new(steps, seed))
}
