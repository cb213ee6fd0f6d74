use std::io;

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("window partition is empty")]
    EmptyPartition,
    #[error("window {index} has non-positive size")]
    NonPositiveWindow { index: usize },
    #[error("window sizes sum to {sum}, expected horizon {horizon}")]
    SumMismatch { sum: usize, horizon: usize },
    #[error("horizon mismatch: expected {expected} periods, got {actual}")]
    HorizonMismatch { expected: usize, actual: usize },
    #[error("no traces supplied")]
    EmptyTraceSet,
    #[error("invalid mean matrix: {0}")]
    InvalidMeans(String),
    #[error("mean {value} at period {period}, arm {arm} is outside [0, 1]")]
    MeanOutOfRange { period: usize, arm: usize, value: f64 },
    #[error("invalid EXP3 parameters: {0}")]
    InvalidExp3(String),
    #[error("sampling probability {prob} outside [{floor}, 1]")]
    InvalidProbability { prob: f64, floor: f64 },
    #[error("reward {0} outside [0, 1]")]
    RewardOutOfRange(f64),
    #[error("arm {arm} out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },
    #[error("segment [{start}, {start}+{length}) exceeds horizon {horizon}")]
    HorizonOverrun { start: usize, length: usize, horizon: usize },
    #[error("mixed window regime: window {small_index} is at or below the threshold {threshold:.4} while window {large_index} is above it")]
    MixedRegime {
        threshold: f64,
        small_index: usize,
        large_index: usize,
    },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("budget assumption violated: {0}")]
    BudgetAssumptionViolated(String),
    #[error("bound hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("non-positive value {0} in log-log fit")]
    NonPositiveValue(f64),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("at {axis} = {value}: {source}")]
    AtPoint {
        axis: String,
        value: f64,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
