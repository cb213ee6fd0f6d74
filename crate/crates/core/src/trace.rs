//! Per-period records of a policy run and the trace CSV writer.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::Result;
use crate::format::g17;

/// One period of a run. `arm` is 0-based in memory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep {
    pub arm: usize,
    /// Probability with which `arm` was drawn.
    pub prob: f64,
    /// Realized reward.
    pub reward: f64,
    /// True mean of the chosen arm at this period.
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyTrace {
    steps: Vec<TraceStep>,
    seed: u64,
}

impl PolicyTrace {
    pub fn new(steps: Vec<TraceStep>, seed: u64) -> Self {
        Self { steps, seed }
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Seed of the stream that produced the trace.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `sum_t Y_t`, kept for diagnostics; regret uses chosen means instead.
    pub fn realized_reward(&self) -> f64 {
        self.steps.iter().map(|s| s.reward).sum()
    }

    pub fn collected_mean(&self) -> f64 {
        self.steps.iter().map(|s| s.mean).sum()
    }

    /// CSV with header `t,arm,prob,reward,mean`; `t` and `arm` are 1-based.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,arm,prob,reward,mean")?;
        for (t, s) in self.steps.iter().enumerate() {
            writeln!(out, "{},{},{},{},{}", t + 1, s.arm + 1, g17(s.prob), g17(s.reward), g17(s.mean))?;
        }
        Ok(())
    }

    pub fn write_csv_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut file = std::io::BufWriter::new(File::create(path)?);
        self.write_csv(&mut file)?;
        file.flush()?;
        Ok(())
    }
}
