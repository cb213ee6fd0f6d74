//! Browser bindings. Each exported function wraps a plain `*_impl`
//! function so the numerics are testable natively.

use wasm_bindgen::prelude::*;

use windowed_bandit::bounds::{BoundReport, Regime};
use windowed_bandit::experiment::{first_trace, ExperimentConfig, Generator, PolicyKind, Windows};
use windowed_bandit::instance::BanditInstance;
use windowed_bandit::oracle::windowed_oracle;
use windowed_bandit::{Error, PolicyTrace, WindowPartition};

/// Values per width in [`bound_curve`]: `W, ub, lb, regime`.
pub const CURVE_STRIDE: usize = 4;

fn regime_code(regime: Regime) -> f64 {
    match regime {
        Regime::SmallWindows => 0.0,
        Regime::LargeWindows => 1.0,
        Regime::Mixed => 2.0,
    }
}

/// Bounds for each uniform width. Widths whose bounds are undefined get NaN
/// bounds and regime code 2.
pub fn bound_curve_impl(horizon: usize, arms: usize, budget: f64, widths: &[usize]) -> Vec<f64> {
    let mut out = Vec::with_capacity(widths.len() * CURVE_STRIDE);
    for &w in widths {
        let report = WindowPartition::uniform(w, horizon).and_then(|p| BoundReport::evaluate(&p, arms, budget));
        match report {
            Ok(r) => out.extend([w as f64, r.ub, r.lb, regime_code(r.regime)]),
            Err(_) => out.extend([w as f64, f64::NAN, f64::NAN, 2.0]),
        }
    }
    out
}

fn config(arms: usize, horizon: usize, budget: f64, width: usize, case: u8, policy: &str, seed: u64) -> Result<ExperimentConfig, Error> {
    Ok(ExperimentConfig {
        arms,
        horizon,
        budget,
        windows: Windows::Uniform(width),
        reps: 1,
        seed,
        policy: policy.parse::<PolicyKind>()?,
        generator: if case == 2 { Generator::LbCase2 } else { Generator::LbCase1 },
    })
}

/// Cumulative pseudo-regret after each period against the windowed oracle.
pub fn regret_path_of(instance: &BanditInstance, partition: &WindowPartition, trace: &PolicyTrace) -> Result<Vec<f64>, Error> {
    let oracle = windowed_oracle(instance.means(), partition)?;
    let mut total = 0.0;
    let mut out = Vec::with_capacity(trace.len());
    for (window, &best) in partition.windows().zip(&oracle.arms) {
        for t in window {
            total += instance.means().get(t, best) - trace.steps()[t].mean;
            out.push(total);
        }
    }
    Ok(out)
}

/// Replication 0 of a hard-instance experiment, as a cumulative regret path.
pub fn regret_path_impl(
    arms: usize,
    horizon: usize,
    budget: f64,
    width: usize,
    case: u8,
    policy: &str,
    seed: u64,
) -> Result<Vec<f64>, Error> {
    let cfg = config(arms, horizon, budget, width, case, policy, seed)?;
    let (instance, trace) = first_trace(&cfg)?;
    regret_path_of(&instance, &cfg.partition()?, &trace)
}

/// Row-major `T x K` means of the hard instance replication 0 would face.
pub fn instance_means_impl(arms: usize, horizon: usize, budget: f64, width: usize, case: u8, seed: u64) -> Result<Vec<f64>, Error> {
    let cfg = config(arms, horizon, budget, width, case, "exp3", seed)?;
    let (instance, _) = first_trace(&cfg)?;
    Ok(instance.means().rows().flatten().copied().collect())
}

fn js_err(e: Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

#[wasm_bindgen]
pub fn bound_curve(horizon: usize, arms: usize, budget: f64, widths: Vec<usize>) -> Vec<f64> {
    bound_curve_impl(horizon, arms, budget, &widths)
}

#[wasm_bindgen]
pub fn regret_path(
    arms: usize,
    horizon: usize,
    budget: f64,
    width: usize,
    case: u8,
    policy: &str,
    seed: u64,
) -> Result<Vec<f64>, JsValue> {
    regret_path_impl(arms, horizon, budget, width, case, policy, seed).map_err(js_err)
}

#[wasm_bindgen]
pub fn instance_means(arms: usize, horizon: usize, budget: f64, width: usize, case: u8, seed: u64) -> Result<Vec<f64>, JsValue> {
    instance_means_impl(arms, horizon, budget, width, case, seed).map_err(js_err)
}
