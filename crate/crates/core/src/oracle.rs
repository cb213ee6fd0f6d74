//! Oracles, variation measurement and pseudo-regret.
//!
//! Argmax ties are broken towards the lowest arm index everywhere.

use crate::error::{Error, Result};
use crate::instance::MeanRewardMatrix;
use crate::partition::WindowPartition;
use crate::trace::PolicyTrace;

/// `sum_{t=1}^{T-1} max_k |mu_{t,k} - mu_{t+1,k}|`; zero for a single period.
pub fn measure_variation(means: &MeanRewardMatrix) -> f64 {
    means
        .rows()
        .zip(means.rows().skip(1))
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
        .sum()
}

/// Value of the windowed oracle plus the best fixed arm of every window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedOracle {
    pub value: f64,
    /// 0-based best arm per window.
    pub arms: Vec<usize>,
}

fn argmax(values: &[f64]) -> (usize, f64) {
    let mut best = (0, values[0]);
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v > best.1 {
            best = (k, v);
        }
    }
    best
}

/// Sum over windows of the best single-arm total inside the window.
pub fn windowed_oracle(means: &MeanRewardMatrix, partition: &WindowPartition) -> Result<WindowedOracle> {
    if partition.horizon() != means.horizon() {
        return Err(Error::HorizonMismatch {
            expected: means.horizon(),
            actual: partition.horizon(),
        });
    }
    let mut totals = vec![0.0; means.arms()];
    let mut value = 0.0;
    let mut arms = Vec::with_capacity(partition.len());
    for window in partition.windows() {
        totals.iter_mut().for_each(|s| *s = 0.0);
        for t in window {
            for (s, &m) in totals.iter_mut().zip(means.row(t)) {
                *s += m;
            }
        }
        let (arm, best) = argmax(&totals);
        value += best;
        arms.push(arm);
    }
    Ok(WindowedOracle { value, arms })
}

/// `sum_t max_k mu_{t,k}`.
pub fn dynamic_oracle(means: &MeanRewardMatrix) -> f64 {
    means.rows().map(|row| argmax(row).1).sum()
}

/// `max_k sum_t mu_{t,k}`.
pub fn static_oracle(means: &MeanRewardMatrix) -> f64 {
    let mut totals = vec![0.0; means.arms()];
    for row in means.rows() {
        for (s, &m) in totals.iter_mut().zip(row) {
            *s += m;
        }
    }
    argmax(&totals).1
}

/// Windowed oracle value minus the average, over traces, of the collected
/// means `sum_t mu_{t,A_t}`.
pub fn pseudo_regret(
    traces: &[PolicyTrace],
    means: &MeanRewardMatrix,
    partition: &WindowPartition,
) -> Result<f64> {
    if traces.is_empty() {
        return Err(Error::EmptyTraceSet);
    }
    let oracle = windowed_oracle(means, partition)?;
    let mut collected = 0.0;
    for trace in traces {
        collected += collected_mean(trace, means)?;
    }
    Ok(oracle.value - collected / traces.len() as f64)
}

/// `sum_t mu_{t,A_t}` for one trace.
pub fn collected_mean(trace: &PolicyTrace, means: &MeanRewardMatrix) -> Result<f64> {
    if trace.len() != means.horizon() {
        return Err(Error::HorizonMismatch {
            expected: means.horizon(),
            actual: trace.len(),
        });
    }
    let mut total = 0.0;
    for (t, step) in trace.steps().iter().enumerate() {
        if step.arm >= means.arms() {
            return Err(Error::ArmOutOfRange { arm: step.arm, arms: means.arms() });
        }
        total += means.get(t, step.arm);
    }
    Ok(total)
}
