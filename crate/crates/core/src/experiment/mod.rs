//! Seeded Monte-Carlo experiments over generated instances.
//!
//! Replication `r` of sweep point `p` uses seed
//! `rng::replication_seed(master, p, r)`; its instance draw and policy run use
//! the `INSTANCE` and `POLICY` children of that seed. Results do not depend
//! on the order in which replications execute.

mod config;
mod results;
mod slope;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

pub use config::{ExperimentConfig, Generator, PolicyKind, Windows, DEFAULT_REPS};
pub use results::{read_results, render_results, parse_results, write_results, ResultRow, RESULTS_HEADER};
pub use slope::{fit_loglog_slope, SlopeFit};

use crate::bounds::{classify_regime, BoundReport, Regime};
use crate::error::{Error, Result};
use crate::instance::{read_instance, BanditInstance};
use crate::instance_gen::{generate_lb_instance, generate_stationary, plan_batches_case1, plan_batches_case2, BatchPlan};
use crate::oracle::{pseudo_regret, windowed_oracle};
use crate::partition::WindowPartition;
use crate::policy::{exp3_trace, we3_gamma, we3_plan, run_plan, We3Plan};
use crate::rng::{mix, replication_seed, stream, tag};
use crate::trace::PolicyTrace;

/// Aggregated pseudo-regret of one configuration.
#[derive(Debug, Clone)]
pub struct RegretSummary {
    pub config: ExperimentConfig,
    /// Values actually used; taken from the instance file for file configs.
    pub arms: usize,
    pub horizon: usize,
    pub budget: f64,
    pub partition: WindowPartition,
    pub regime: Regime,
    pub mean_regret: f64,
    /// Sample standard deviation (zero for a single replication).
    pub std_regret: f64,
    pub regrets: Vec<f64>,
    /// Oracle minus realized reward, averaged; diagnostic only.
    pub mean_realized_regret: f64,
    pub wall_time: Duration,
}

enum Source {
    Fixed(BanditInstance),
    Lb(BatchPlan),
}

/// Everything one point needs, resolved once before the replications run.
struct Setup {
    arms: usize,
    horizon: usize,
    budget: f64,
    partition: WindowPartition,
    source: Source,
    plan: Option<We3Plan>,
    policy: PolicyKind,
}

impl Setup {
    fn resolve(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let (arms, horizon, budget, partition, source) = match &config.generator {
            Generator::File(path) => {
                let (instance, partition) = read_instance(path)?;
                (instance.arms(), instance.horizon(), instance.budget(), partition, Source::Fixed(instance))
            }
            Generator::Stationary(means) => {
                // A constant table lies in L(V) for every V; keep the configured budget.
                let base = generate_stationary(config.arms, config.horizon, means)?;
                let instance = BanditInstance::new(base.means().clone(), base.family(), config.budget)?;
                (config.arms, config.horizon, config.budget, config.partition()?, Source::Fixed(instance))
            }
            Generator::LbCase1 | Generator::LbCase2 => {
                let partition = config.partition()?;
                let (k, t, v) = (config.arms, config.horizon, config.budget);
                let plan = if config.generator == Generator::LbCase1 {
                    plan_batches_case1(&partition, k, v, t)?
                } else {
                    plan_batches_case2(&partition, k, v, t)?
                };
                (k, t, v, partition, Source::Lb(plan))
            }
        };
        let plan = match config.policy {
            PolicyKind::We3 => Some(we3_plan(&partition, arms, budget, horizon)?),
            PolicyKind::Exp3 => None,
        };
        Ok(Self { arms, horizon, budget, partition, source, plan, policy: config.policy })
    }

    fn instance(&self, seed: u64) -> Result<BanditInstance> {
        match &self.source {
            Source::Fixed(instance) => Ok(instance.clone()),
            Source::Lb(plan) => generate_lb_instance(plan, &mut stream(mix(seed, tag::INSTANCE))),
        }
    }

    fn trace(&self, instance: &BanditInstance, seed: u64) -> Result<PolicyTrace> {
        let policy_seed = mix(seed, tag::POLICY);
        match (&self.plan, self.policy) {
            (Some(plan), PolicyKind::We3) => run_plan(instance, plan, policy_seed),
            _ => exp3_trace(instance, we3_gamma(self.horizon, self.arms), policy_seed),
        }
    }

    /// `(pseudo-regret, realized regret)` of one replication.
    fn replicate(&self, seed: u64) -> Result<(f64, f64)> {
        let instance = self.instance(seed)?;
        let trace = self.trace(&instance, seed)?;
        let regret = pseudo_regret(std::slice::from_ref(&trace), instance.means(), &self.partition)?;
        let oracle = windowed_oracle(instance.means(), &self.partition)?.value;
        Ok((regret, oracle - trace.realized_reward()))
    }
}

fn run_replications(setup: &Setup, seeds: &[u64]) -> Vec<Result<(f64, f64)>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        seeds.par_iter().map(|&s| setup.replicate(s)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        seeds.iter().map(|&s| setup.replicate(s)).collect()
    }
}

fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn run_point(config: &ExperimentConfig, point: u64) -> Result<RegretSummary> {
    let started = Instant::now();
    let setup = Setup::resolve(config)?;
    let seeds: Vec<u64> = (0..config.reps as u64).map(|r| replication_seed(config.seed, point, r)).collect();
    let outcomes = run_replications(&setup, &seeds).into_iter().collect::<Result<Vec<_>>>()?;
    let regrets: Vec<f64> = outcomes.iter().map(|o| o.0).collect();
    let realized: Vec<f64> = outcomes.iter().map(|o| o.1).collect();
    let (mean_regret, std_regret) = mean_and_std(&regrets);
    Ok(RegretSummary {
        config: config.clone(),
        arms: setup.arms,
        horizon: setup.horizon,
        budget: setup.budget,
        regime: classify_regime(&setup.partition, setup.arms, setup.budget, setup.horizon),
        partition: setup.partition,
        mean_regret,
        std_regret,
        regrets,
        mean_realized_regret: mean_and_std(&realized).0,
        wall_time: started.elapsed(),
    })
}

/// Runs every replication of `config` and aggregates pseudo-regret against
/// the configured partition.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RegretSummary> {
    run_point(config, 0)
}

/// First trace of a configuration, for inspection and trace files.
pub fn first_trace(config: &ExperimentConfig) -> Result<(BanditInstance, PolicyTrace)> {
    let setup = Setup::resolve(config)?;
    let seed = replication_seed(config.seed, 0, 0);
    let instance = setup.instance(seed)?;
    let trace = setup.trace(&instance, seed)?;
    Ok((instance, trace))
}

/// A swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    V,
    K,
    T,
    W,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "V" => Ok(Axis::V),
            "K" => Ok(Axis::K),
            "T" => Ok(Axis::T),
            "W" => Ok(Axis::W),
            other => Err(Error::ConfigInvalid(format!("unknown axis {other:?} (expected V, K, T or W)"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::V => "V",
            Axis::K => "K",
            Axis::T => "T",
            Axis::W => "W",
        })
    }
}

fn integer_value(axis: Axis, value: f64) -> Result<usize> {
    if value.fract() != 0.0 || value < 1.0 || !value.is_finite() {
        return Err(Error::ConfigInvalid(format!("{axis} = {value} must be a positive integer")));
    }
    Ok(value as usize)
}

impl Axis {
    pub fn apply(self, config: &mut ExperimentConfig, value: f64) -> Result<()> {
        match self {
            Axis::V => config.budget = value,
            Axis::K => config.arms = integer_value(self, value)?,
            Axis::T => config.horizon = integer_value(self, value)?,
            Axis::W => config.windows = Windows::Uniform(integer_value(self, value)?),
        }
        Ok(())
    }
}

/// One summary per value of `axis`, in input order. Point `p` derives its
/// seeds from `(master, p, r)`.
pub fn sweep(base: &ExperimentConfig, axis: Axis, values: &[f64]) -> Result<Vec<RegretSummary>> {
    if values.is_empty() {
        return Err(Error::ConfigInvalid("sweep needs at least one value".into()));
    }
    let at = |value: f64, source: Error| Error::AtPoint { axis: axis.to_string(), value, source: Box::new(source) };
    values
        .iter()
        .enumerate()
        .map(|(p, &value)| {
            let mut cfg = base.clone();
            axis.apply(&mut cfg, value).map_err(|e| at(value, e))?;
            let summary = run_point(&cfg, p as u64).map_err(|e| at(value, e))?;
            if summary.regime == Regime::Mixed {
                let source = BoundReport::evaluate(&summary.partition, summary.arms, summary.budget)
                    .err()
                    .unwrap_or_else(|| Error::ConfigInvalid("mixed window regime".into()));
                return Err(at(value, source));
            }
            Ok(summary)
        })
        .collect()
}

impl RegretSummary {
    /// Results row; `ub`/`lb` are NaN when the bound hypotheses fail.
    pub fn to_row(&self, axis: &str, value: f64) -> ResultRow {
        let (ub, lb) = BoundReport::evaluate(&self.partition, self.arms, self.budget)
            .map(|r| (r.ub, r.lb))
            .unwrap_or((f64::NAN, f64::NAN));
        ResultRow {
            axis: axis.to_string(),
            value,
            arms: self.arms,
            horizon: self.horizon,
            budget: self.budget,
            width: self.partition.sizes()[0],
            regime: self.regime,
            reps: self.regrets.len(),
            mean_regret: self.mean_regret,
            std_regret: self.std_regret,
            ub,
            lb,
        }
    }
}

/// Rows of a sweep, tagged with the axis value of each point.
pub fn sweep_rows(axis: Axis, values: &[f64], summaries: &[RegretSummary]) -> Vec<ResultRow> {
    values.iter().zip(summaries).map(|(&v, s)| s.to_row(&axis.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stationary_cfg() -> ExperimentConfig {
        ExperimentConfig {
            arms: 2,
            horizon: 2000,
            budget: 0.0,
            windows: Windows::Uniform(2000),
            reps: 4,
            seed: 5,
            policy: PolicyKind::Exp3,
            generator: Generator::Stationary(vec![0.7, 0.5]),
        }
    }

    #[test]
    fn summary_mean_matches_replications() {
        let s = run_experiment(&stationary_cfg()).unwrap();
        assert_eq!(s.regrets.len(), 4);
        let mean = s.regrets.iter().sum::<f64>() / 4.0;
        assert!((s.mean_regret - mean).abs() <= 1e-9 * mean.abs().max(1.0));
        assert!(s.std_regret >= 0.0);
    }

    #[test]
    fn deterministic_summaries() {
        let mut cfg = stationary_cfg();
        cfg.reps = 1;
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a.regrets, b.regrets);
        cfg.seed = 6;
        assert_ne!(run_experiment(&cfg).unwrap().regrets, a.regrets);
    }

    #[test]
    fn replication_order_does_not_matter() {
        let cfg = stationary_cfg();
        let setup = Setup::resolve(&cfg).unwrap();
        let seeds: Vec<u64> = (0..4).map(|r| replication_seed(cfg.seed, 0, r)).collect();
        let forward: Vec<f64> = seeds.iter().map(|&s| setup.replicate(s).unwrap().0).collect();
        let backward: Vec<f64> = seeds.iter().rev().map(|&s| setup.replicate(s).unwrap().0).collect();
        let (a, _) = mean_and_std(&forward);
        let (b, _) = mean_and_std(&backward);
        assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
    }

    #[test]
    fn sweep_errors() {
        let base = stationary_cfg();
        assert!(matches!(sweep(&base, Axis::T, &[]), Err(Error::ConfigInvalid(_))));
        let err = sweep(&base, Axis::K, &[2.5]).unwrap_err();
        assert!(matches!(err, Error::AtPoint { ref axis, value, .. } if axis == "K" && value == 2.5));
        let lb = ExperimentConfig { reps: 1, ..ExperimentConfig::default() };
        let err = sweep(&lb, Axis::W, &[20.0, 5000.0]).unwrap_err();
        assert!(matches!(err, Error::AtPoint { value, .. } if value == 5000.0));
    }

    #[test]
    fn sweep_rows_follow_input_order() {
        let base = ExperimentConfig { reps: 2, horizon: 5000, budget: 5.0, ..ExperimentConfig::default() };
        let values = [5.0, 10.0];
        let out = sweep(&base, Axis::V, &values).unwrap();
        let rows = sweep_rows(Axis::V, &values, &out);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].budget, 5.0);
        assert_eq!(rows[1].budget, 10.0);
        assert!(rows.iter().all(|r| r.regime == Regime::SmallWindows));
    }
}
