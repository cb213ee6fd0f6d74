//! Bandits benchmarked against a windowed oracle.
//!
//! The horizon `[T]` is split into contiguous windows; the oracle collects the
//! best fixed-arm total inside each window. One window gives the static
//! (best-arm-in-hindsight) oracle and unit windows give the dynamic oracle.
//! The crate provides the oracles and pseudo-regret, the EXP3 and windowed
//! EXP3 (WE3) policies, the hard-instance generators matching the lower bound
//! constructions, closed-form regret bounds, and a seeded Monte-Carlo harness.

pub mod bounds;
pub mod error;
pub mod experiment;
pub mod format;
pub mod instance;
pub mod instance_gen;
pub mod oracle;
pub mod partition;
pub mod policy;
pub mod rng;
pub mod trace;

pub use bounds::{classify_regime, BoundReport, Regime};
pub use error::{Error, Result};
pub use instance::{BanditInstance, MeanRewardMatrix, RewardFamily};
pub use oracle::{dynamic_oracle, measure_variation, pseudo_regret, static_oracle, windowed_oracle};
pub use partition::WindowPartition;
pub use policy::{exp3_run, we3_gamma, we3_plan, we3_run, Exp3State, We3Plan};
pub use trace::{PolicyTrace, TraceStep};
