use crate::bounds::{classify_regime, is_small_window, window_threshold, Regime};
use crate::error::{Error, Result};
use crate::instance::BanditInstance;
use crate::partition::WindowPartition;
use crate::rng::stream;
use crate::trace::PolicyTrace;

use super::exp3::exp3_run;

/// `min{1, sqrt(K log K / ((e - 1) length))}`.
pub fn we3_gamma(length: usize, arms: usize) -> f64 {
    let k = arms as f64;
    let rate = (k * k.ln() / ((std::f64::consts::E - 1.0) * length as f64)).sqrt();
    rate.min(1.0)
}

/// A block of consecutive periods on which EXP3 is restarted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    /// 0-based first period.
    pub start: usize,
    pub length: usize,
    pub gamma: f64,
}

/// Restart schedule of WE3. `regime` is never [`Regime::Mixed`].
#[derive(Debug, Clone, PartialEq)]
pub struct We3Plan {
    pub regime: Regime,
    /// Batch size used in the small-window regime.
    pub batch: Option<usize>,
    pub segments: Vec<Segment>,
}

impl We3Plan {
    pub fn horizon(&self) -> usize {
        self.segments.iter().map(|s| s.length).sum()
    }
}

/// Builds the restart schedule.
///
/// Small windows: EXP3 restarts every `min(ceil(K^{1/3} (T/V)^{2/3}), T)`
/// periods, ignoring window boundaries (a single batch when `V = 0`).
/// Large windows: EXP3 restarts at every window.
pub fn we3_plan(partition: &WindowPartition, arms: usize, budget: f64, horizon: usize) -> Result<We3Plan> {
    if arms < 2 {
        return Err(Error::InvalidExp3(format!("need at least 2 arms, got {arms}")));
    }
    if !(budget >= 0.0) {
        return Err(Error::ConfigInvalid(format!("budget {budget} must be >= 0")));
    }
    if partition.horizon() != horizon {
        return Err(Error::HorizonMismatch { expected: horizon, actual: partition.horizon() });
    }
    let threshold = window_threshold(horizon, arms, budget);
    match classify_regime(partition, arms, budget, horizon) {
        Regime::SmallWindows => {
            let batch = if threshold.ceil() >= horizon as f64 { horizon } else { threshold.ceil() as usize };
            let segments = (0..horizon)
                .step_by(batch)
                .map(|start| {
                    let length = batch.min(horizon - start);
                    Segment { start, length, gamma: we3_gamma(length, arms) }
                })
                .collect();
            Ok(We3Plan { regime: Regime::SmallWindows, batch: Some(batch), segments })
        }
        Regime::LargeWindows => {
            let segments = partition
                .windows()
                .map(|w| Segment { start: w.start, length: w.len(), gamma: we3_gamma(w.len(), arms) })
                .collect();
            Ok(We3Plan { regime: Regime::LargeWindows, batch: None, segments })
        }
        Regime::Mixed => {
            let sizes = partition.sizes();
            let small = |w: &usize| is_small_window(*w, horizon, arms, budget);
            Err(Error::MixedRegime {
                threshold,
                small_index: sizes.iter().position(small).unwrap_or(0),
                large_index: sizes.iter().position(|w| !small(w)).unwrap_or(0),
            })
        }
    }
}

/// Runs WE3 over the whole horizon using the instance's declared budget.
pub fn we3_run(instance: &BanditInstance, partition: &WindowPartition, seed: u64) -> Result<PolicyTrace> {
    let plan = we3_plan(partition, instance.arms(), instance.budget(), instance.horizon())?;
    run_plan(instance, &plan, seed)
}

/// Executes a plan, restarting EXP3 at each segment on one shared stream.
pub fn run_plan(instance: &BanditInstance, plan: &We3Plan, seed: u64) -> Result<PolicyTrace> {
    if plan.horizon() != instance.horizon() {
        return Err(Error::HorizonMismatch { expected: instance.horizon(), actual: plan.horizon() });
    }
    let mut rng = stream(seed);
    let mut steps = Vec::with_capacity(instance.horizon());
    for seg in &plan.segments {
        steps.extend(exp3_run(instance, seg.start, seg.length, seg.gamma, &mut rng)?);
    }
    Ok(PolicyTrace::new(steps, seed))
}
