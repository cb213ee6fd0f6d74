//! Variation-budgeted hard instances and stationary baselines.
//!
//! The hard instances group windows into batches. Within batch `i` one arm,
//! drawn uniformly, has mean `1/2 + eps_i` and every other arm has mean
//! `1/2`, with `eps_i = min{ sqrt(K / T_i) / 4, V T_i / (2T) }`. Rewards are
//! Bernoulli.

use std::ops::Range;

use rand::Rng;

use crate::bounds::{is_small_window, window_threshold};
use crate::error::{Error, Result};
use crate::instance::{BanditInstance, MeanRewardMatrix, RewardFamily};
use crate::partition::WindowPartition;

/// One block of constant means.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    /// 0-based first period.
    pub start: usize,
    pub length: usize,
    /// Gap of the raised arm over 1/2.
    pub epsilon: f64,
}

impl Batch {
    pub fn periods(&self) -> Range<usize> {
        self.start..self.start + self.length
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchPlan {
    pub batches: Vec<Batch>,
    pub arms: usize,
    pub budget: f64,
    pub horizon: usize,
    /// Real-valued `K^{1/3} (T/V)^{2/3}` the plan was built against.
    pub threshold: f64,
}

/// `min{ sqrt(K / length) / 4, V length / (2T) }`.
pub fn batch_gap(length: usize, arms: usize, budget: f64, horizon: usize) -> f64 {
    let info = 0.25 * (arms as f64 / length as f64).sqrt();
    let drift = budget * length as f64 / (2.0 * horizon as f64);
    info.min(drift)
}

/// Greedy grouping of consecutive windows: a batch closes as soon as its
/// length reaches `threshold`; a tail shorter than `threshold` joins the last
/// batch. Returns batch lengths.
pub fn group_windows(sizes: &[usize], threshold: f64) -> Vec<usize> {
    let mut batches = Vec::new();
    let mut open = 0usize;
    for &w in sizes {
        open += w;
        if open as f64 >= threshold {
            batches.push(open);
            open = 0;
        }
    }
    if open > 0 {
        match batches.last_mut() {
            Some(last) => *last += open,
            None => batches.push(open),
        }
    }
    batches
}

fn check_common(partition: &WindowPartition, arms: usize, budget: f64, horizon: usize) -> Result<()> {
    if partition.horizon() != horizon {
        return Err(Error::HorizonMismatch { expected: horizon, actual: partition.horizon() });
    }
    if !(budget > 0.0) || !budget.is_finite() {
        return Err(Error::PreconditionViolated(format!("budget V = {budget} must be positive")));
    }
    if arms < 2 {
        return Err(Error::PreconditionViolated(format!("need K >= 2, got {arms}")));
    }
    Ok(())
}

fn build_plan(lengths: Vec<usize>, arms: usize, budget: f64, horizon: usize) -> BatchPlan {
    let mut start = 0;
    let batches = lengths
        .into_iter()
        .map(|length| {
            let b = Batch { start, length, epsilon: batch_gap(length, arms, budget, horizon) };
            start += length;
            b
        })
        .collect();
    BatchPlan { batches, arms, budget, horizon, threshold: window_threshold(horizon, arms, budget) }
}

/// Batches for the small-window construction; every window must be at or
/// below the threshold.
///
/// When the whole horizon is shorter than the threshold the plan is a single
/// batch of length `T`.
pub fn plan_batches_case1(partition: &WindowPartition, arms: usize, budget: f64, horizon: usize) -> Result<BatchPlan> {
    check_common(partition, arms, budget, horizon)?;
    let threshold = window_threshold(horizon, arms, budget);
    if let Some(j) = partition.sizes().iter().position(|&w| !is_small_window(w, horizon, arms, budget)) {
        return Err(Error::PreconditionViolated(format!(
            "window {j} has size {} above the threshold {threshold:.4}",
            partition.sizes()[j]
        )));
    }
    let lengths = group_windows(partition.sizes(), threshold);
    Ok(build_plan(lengths, arms, budget, horizon))
}

/// One batch per window; every window must exceed the threshold.
pub fn plan_batches_case2(partition: &WindowPartition, arms: usize, budget: f64, horizon: usize) -> Result<BatchPlan> {
    check_common(partition, arms, budget, horizon)?;
    if let Some(j) = partition.sizes().iter().position(|&w| is_small_window(w, horizon, arms, budget)) {
        return Err(Error::PreconditionViolated(format!(
            "window {j} has size {} at or below the threshold {:.4}",
            partition.sizes()[j],
            window_threshold(horizon, arms, budget)
        )));
    }
    Ok(build_plan(partition.sizes().to_vec(), arms, budget, horizon))
}

impl BatchPlan {
    fn check_budget(&self) -> Result<()> {
        let (k, v, t) = (self.arms, self.budget, self.horizon);
        if k < 2 || t < k {
            return Err(Error::BudgetAssumptionViolated(format!("need T >= K >= 2, got T = {t}, K = {k}")));
        }
        if k as f64 * v > t as f64 {
            return Err(Error::BudgetAssumptionViolated(format!("K V = {} exceeds T = {t}", k as f64 * v)));
        }
        Ok(())
    }

    /// Draws the raised arm of every batch uniformly from `[K]`.
    pub fn draw_arms<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        self.batches.iter().map(|_| rng.random_range(0..self.arms)).collect()
    }

    /// Mean table for a fixed choice of raised arms.
    pub fn instance_for(&self, raised: &[usize]) -> Result<BanditInstance> {
        self.check_budget()?;
        if raised.len() != self.batches.len() {
            return Err(Error::ConfigInvalid(format!(
                "{} raised arms for {} batches",
                raised.len(),
                self.batches.len()
            )));
        }
        let mut data = vec![0.5; self.horizon * self.arms];
        for (batch, &arm) in self.batches.iter().zip(raised) {
            if arm >= self.arms {
                return Err(Error::ArmOutOfRange { arm, arms: self.arms });
            }
            for t in batch.periods() {
                data[t * self.arms + arm] = 0.5 + batch.epsilon;
            }
        }
        let means = MeanRewardMatrix::new(self.horizon, self.arms, data)?;
        BanditInstance::new(means, RewardFamily::Bernoulli, self.budget)
    }
}

/// Random hard instance from a batch plan.
pub fn generate_lb_instance<R: Rng + ?Sized>(plan: &BatchPlan, rng: &mut R) -> Result<BanditInstance> {
    plan.check_budget()?;
    let raised = plan.draw_arms(rng);
    plan.instance_for(&raised)
}

/// Every period has mean vector `means`; declared budget 0.
pub fn generate_stationary(arms: usize, horizon: usize, means: &[f64]) -> Result<BanditInstance> {
    if means.len() != arms {
        return Err(Error::ConfigInvalid(format!("{} means for {arms} arms", means.len())));
    }
    if let Some(arm) = means.iter().position(|m| !(0.0..=1.0).contains(m)) {
        return Err(Error::MeanOutOfRange { period: 0, arm, value: means[arm] });
    }
    let matrix = MeanRewardMatrix::constant(horizon, means)?;
    BanditInstance::new(matrix, RewardFamily::Bernoulli, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{dynamic_oracle, measure_variation, static_oracle, windowed_oracle};
    use crate::rng::stream;

    #[test]
    fn grouping_rule() {
        assert_eq!(group_windows(&[20; 50], 215.443_469_003_188_3), vec![220, 220, 220, 340]);
        assert_eq!(group_windows(&[5, 5, 5], 15.0), vec![15]);
        assert_eq!(group_windows(&[4, 4], 15.0), vec![8]);
        assert_eq!(group_windows(&[10, 3, 10, 3], 12.0), vec![13, 13]);
    }

    #[test]
    fn single_window_at_threshold() {
        // K = 27, V = 3, T = 3: threshold 27^{1/3} (3/3)^{2/3} = 3 = W_1.
        let p = WindowPartition::single(3).unwrap();
        let plan = plan_batches_case1(&p, 27, 3.0, 3).unwrap();
        assert_eq!(plan.batches.len(), 1);
        assert_eq!(plan.batches[0].length, 3);
    }

    #[test]
    fn gap_examples() {
        assert!((batch_gap(216, 10, 50.0, 50_000) - 0.053_79).abs() < 1e-5);
        let p = WindowPartition::uniform(400, 20_000).unwrap();
        let plan = plan_batches_case2(&p, 10, 50.0, 20_000).unwrap();
        assert_eq!(plan.batches.len(), 50);
        for b in &plan.batches {
            assert!((b.epsilon - 0.039_528_5).abs() < 1e-7);
        }
        let whole = WindowPartition::single(20_000).unwrap();
        let plan = plan_batches_case2(&whole, 10, 50.0, 20_000).unwrap();
        assert_eq!(plan.batches.len(), 1);
        assert_eq!(plan.batches[0].epsilon, (0.25 * (10.0f64 / 20_000.0).sqrt()).min(25.0));
    }

    #[test]
    fn preconditions() {
        let small = WindowPartition::uniform(20, 1000).unwrap();
        // Threshold is about 15.87 here, below the window size.
        assert!(matches!(plan_batches_case1(&small, 10, 50.0, 1000), Err(Error::PreconditionViolated(_))));
        let p = WindowPartition::uniform(20, 50_000).unwrap();
        assert!(matches!(plan_batches_case2(&p, 10, 50.0, 50_000), Err(Error::PreconditionViolated(_))));
        assert!(plan_batches_case1(&p, 10, 0.0, 50_000).is_err());

        let p = WindowPartition::uniform(400, 20_000).unwrap();
        let plan = plan_batches_case2(&p, 10, 2_500.0, 20_000);
        // KV > T: planning may succeed but generation must refuse.
        if let Ok(plan) = plan {
            assert!(matches!(
                generate_lb_instance(&plan, &mut stream(0)),
                Err(Error::BudgetAssumptionViolated(_))
            ));
        }
        let plan = BatchPlan {
            batches: vec![Batch { start: 0, length: 100, epsilon: 0.1 }],
            arms: 10,
            budget: 11.0,
            horizon: 100,
            threshold: 1.0,
        };
        assert!(matches!(generate_lb_instance(&plan, &mut stream(0)), Err(Error::BudgetAssumptionViolated(_))));
    }

    #[test]
    fn single_batch_instance() {
        let plan = BatchPlan {
            batches: vec![Batch { start: 0, length: 5, epsilon: 0.1 }],
            arms: 2,
            budget: 1.0,
            horizon: 5,
            threshold: 5.0,
        };
        let inst = plan.instance_for(&[0]).unwrap();
        for row in inst.means().rows() {
            assert_eq!(row, &[0.6, 0.5]);
        }
        assert_eq!(inst.family(), RewardFamily::Bernoulli);
    }

    #[test]
    fn generated_instances_respect_budget() {
        let p = WindowPartition::uniform(20, 50_000).unwrap();
        let plan = plan_batches_case1(&p, 10, 50.0, 50_000).unwrap();
        for seed in 0..100 {
            let inst = generate_lb_instance(&plan, &mut stream(seed)).unwrap();
            assert!(measure_variation(inst.means()) <= 50.0);
            assert!(inst.means().rows().flatten().all(|&m| (0.25..=0.75).contains(&m)));
        }
    }

    #[test]
    fn stationary_examples() {
        let inst = generate_stationary(2, 10, &[0.9, 0.1]).unwrap();
        assert!((static_oracle(inst.means()) - 9.0).abs() < 1e-12);
        assert!((dynamic_oracle(inst.means()) - 9.0).abs() < 1e-12);
        assert_eq!(measure_variation(inst.means()), 0.0);
        assert_eq!(inst.budget(), 0.0);
        for sizes in [vec![10], vec![3, 7], vec![1; 10], vec![5, 2, 3]] {
            let p = WindowPartition::new(sizes, 10).unwrap();
            assert!((windowed_oracle(inst.means(), &p).unwrap().value - 9.0).abs() < 1e-12);
        }
        assert!(matches!(generate_stationary(2, 10, &[0.9, 1.1]), Err(Error::MeanOutOfRange { .. })));
    }
}
