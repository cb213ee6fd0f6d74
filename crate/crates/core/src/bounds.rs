//! Closed-form regret bounds and the window-size regime threshold.
//!
//! All logarithms are natural. Evaluators return
//! [`Error::HypothesisViolated`] instead of clamping when their assumptions
//! fail.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::partition::WindowPartition;

/// `2 sqrt(e - 1)`, the EXP3 constant.
pub fn exp3_constant() -> f64 {
    2.0 * (std::f64::consts::E - 1.0).sqrt()
}

/// `4 + 2 sqrt(e - 1) (1 + sqrt 2)`.
pub fn small_regime_constant() -> f64 {
    4.0 + exp3_constant() * (1.0 + std::f64::consts::SQRT_2)
}

/// `(1 - sqrt(log(4/3))) / 8`.
pub fn lower_bound_constant() -> f64 {
    (1.0 - (4.0f64 / 3.0).ln().sqrt()) / 8.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    SmallWindows,
    LargeWindows,
    Mixed,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::SmallWindows => "small",
            Regime::LargeWindows => "large",
            Regime::Mixed => "mixed",
        })
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Regime::SmallWindows),
            "large" => Ok(Regime::LargeWindows),
            "mixed" => Ok(Regime::Mixed),
            other => Err(Error::SchemaMismatch(format!("unknown regime {other:?}"))),
        }
    }
}

/// Window-size threshold `K^{1/3} (T/V)^{2/3}`; infinite when `V = 0`.
pub fn window_threshold(horizon: usize, arms: usize, budget: f64) -> f64 {
    if budget <= 0.0 {
        return f64::INFINITY;
    }
    (arms as f64).cbrt() * (horizon as f64 / budget).powf(2.0 / 3.0)
}

/// `W V^{2/3} <= T^{2/3} K^{1/3}`. Equality counts as small.
pub fn is_small_window(width: usize, horizon: usize, arms: usize, budget: f64) -> bool {
    width as f64 * budget.max(0.0).powf(2.0 / 3.0) <= (horizon as f64).powf(2.0 / 3.0) * (arms as f64).cbrt()
}

/// Small if every window is small, large if every window is large.
pub fn classify_regime(partition: &WindowPartition, arms: usize, budget: f64, horizon: usize) -> Regime {
    let mut small = false;
    let mut large = false;
    for &w in partition.sizes() {
        if is_small_window(w, horizon, arms, budget) {
            small = true;
        } else {
            large = true;
        }
    }
    match (small, large) {
        (true, false) => Regime::SmallWindows,
        (false, true) => Regime::LargeWindows,
        _ => Regime::Mixed,
    }
}

fn check_upper(horizon: usize, arms: usize, budget: f64) -> Result<()> {
    if arms < 2 {
        return Err(Error::HypothesisViolated(format!("K = {arms} < 2")));
    }
    if !(budget > 0.0) || !budget.is_finite() {
        return Err(Error::HypothesisViolated(format!("V = {budget} must be positive and finite")));
    }
    if arms as f64 * budget > horizon as f64 {
        return Err(Error::HypothesisViolated(format!("K V = {} > T = {horizon}", arms as f64 * budget)));
    }
    Ok(())
}

fn check_lower(horizon: usize, arms: usize, budget: Option<f64>) -> Result<()> {
    if arms < 2 || horizon < arms {
        return Err(Error::HypothesisViolated(format!("need T >= K >= 2, got T = {horizon}, K = {arms}")));
    }
    if let Some(v) = budget {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::HypothesisViolated(format!("V = {v} must be positive and finite")));
        }
        if v > horizon as f64 / arms as f64 {
            return Err(Error::HypothesisViolated(format!("V = {v} > T/K = {}", horizon as f64 / arms as f64)));
        }
    }
    Ok(())
}

/// WE3 upper bound when every window is small:
/// `(4 + 2 sqrt(e-1)(1 + sqrt 2)) (K V log K)^{1/3} T^{2/3}`.
pub fn ub_small(horizon: usize, arms: usize, budget: f64) -> Result<f64> {
    check_upper(horizon, arms, budget)?;
    let k = arms as f64;
    Ok(small_regime_constant() * (k * budget * k.ln()).cbrt() * (horizon as f64).powf(2.0 / 3.0))
}

/// WE3 upper bound when every window is large: `sum_j 2 sqrt(e-1) sqrt(W_j K log K)`.
pub fn ub_large(partition: &WindowPartition, arms: usize) -> Result<f64> {
    if arms < 2 {
        return Err(Error::HypothesisViolated(format!("K = {arms} < 2")));
    }
    let kl = arms as f64 * (arms as f64).ln();
    Ok(partition.sizes().iter().map(|&w| exp3_constant() * (w as f64 * kl).sqrt()).sum())
}

/// Lower bound when every window is small: `(c0 / 3) (K V)^{1/3} T^{2/3}`.
pub fn lb_small(horizon: usize, arms: usize, budget: f64) -> Result<f64> {
    check_lower(horizon, arms, Some(budget))?;
    let kv = arms as f64 * budget;
    Ok(lower_bound_constant() / 3.0 * kv.cbrt() * (horizon as f64).powf(2.0 / 3.0))
}

/// Lower bound when every window is large: `c0 sum_i sqrt(K W_i)`.
pub fn lb_large(partition: &WindowPartition, arms: usize) -> Result<f64> {
    check_lower(partition.horizon(), arms, None)?;
    let k = arms as f64;
    Ok(lower_bound_constant() * partition.sizes().iter().map(|&w| (k * w as f64).sqrt()).sum::<f64>())
}

/// Matching upper and lower bounds for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub regime: Regime,
    pub ub: f64,
    pub lb: f64,
    /// `K^{1/3} (T/V)^{2/3}`.
    pub threshold: f64,
}

impl BoundReport {
    pub fn evaluate(partition: &WindowPartition, arms: usize, budget: f64) -> Result<Self> {
        let horizon = partition.horizon();
        let threshold = window_threshold(horizon, arms, budget);
        let regime = classify_regime(partition, arms, budget, horizon);
        let (ub, lb) = match regime {
            Regime::SmallWindows => (ub_small(horizon, arms, budget)?, lb_small(horizon, arms, budget)?),
            Regime::LargeWindows => {
                check_lower(horizon, arms, Some(budget))?;
                (ub_large(partition, arms)?, lb_large(partition, arms)?)
            }
            Regime::Mixed => {
                let sizes = partition.sizes();
                let small_index = sizes.iter().position(|&w| is_small_window(w, horizon, arms, budget));
                let large_index = sizes.iter().position(|&w| !is_small_window(w, horizon, arms, budget));
                return Err(Error::MixedRegime {
                    threshold,
                    small_index: small_index.unwrap_or(0),
                    large_index: large_index.unwrap_or(0),
                });
            }
        };
        Ok(Self { regime, ub, lb, threshold })
    }

    /// `regime,threshold,ub,lb`
    pub fn csv_header() -> &'static str {
        "regime,threshold,ub,lb"
    }

    pub fn csv_row(&self) -> String {
        use crate::format::g17;
        format!("{},{},{},{}", self.regime, g17(self.threshold), g17(self.ub), g17(self.lb))
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.regime {
            Regime::SmallWindows => "SmallWindows",
            Regime::LargeWindows => "LargeWindows",
            Regime::Mixed => "Mixed",
        };
        writeln!(f, "regime:    {name}")?;
        writeln!(f, "threshold: {:.6}", self.threshold)?;
        writeln!(f, "ub:        {:.6e}", self.ub)?;
        write!(f, "lb:        {:.6e}", self.lb)
    }
}
