//! Mean reward tables, reward families and the plain-text instance file.
//!
//! Instance file layout (periods are 1-based on disk):
//!
//! ```text
//! T K V
//! W_1 W_2 ... W_N
//! mu_{1,1} ... mu_{1,K}
//! ...
//! mu_{T,1} ... mu_{T,K}
//! ```
//!
//! Reals are written with 17 significant digits. Readers reject means
//! outside `[0, 1]`. The file does not record a reward family; readers return
//! Bernoulli instances.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::format::g17;
use crate::oracle::measure_variation;
use crate::partition::WindowPartition;

/// The `T x K` table of mean rewards, each entry in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanRewardMatrix {
    horizon: usize,
    arms: usize,
    data: Vec<f64>,
}

impl MeanRewardMatrix {
    /// Builds a matrix from row-major data.
    pub fn new(horizon: usize, arms: usize, data: Vec<f64>) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidMeans("horizon must be at least 1".into()));
        }
        if arms < 2 {
            return Err(Error::InvalidMeans(format!("need at least 2 arms, got {arms}")));
        }
        if data.len() != horizon * arms {
            return Err(Error::InvalidMeans(format!(
                "expected {} entries, got {}",
                horizon * arms,
                data.len()
            )));
        }
        for (i, &value) in data.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::MeanOutOfRange {
                    period: i / arms,
                    arm: i % arms,
                    value,
                });
            }
        }
        Ok(Self { horizon, arms, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let arms = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(bad) = rows.iter().position(|r| r.as_ref().len() != arms) {
            return Err(Error::InvalidMeans(format!("row {bad} has a different arm count")));
        }
        let data = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::new(rows.len(), arms, data)
    }

    /// Every period has the same mean vector.
    pub fn constant(horizon: usize, means: &[f64]) -> Result<Self> {
        let data = means.iter().copied().cycle().take(horizon * means.len()).collect();
        Self::new(horizon, means.len(), data)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    /// Means of all arms at 0-based period `t`.
    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.arms..(t + 1) * self.arms]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.arms)
    }

    pub fn get(&self, t: usize, arm: usize) -> f64 {
        self.data[t * self.arms + arm]
    }
}

/// Distribution of the realized reward given its mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewardFamily {
    Bernoulli,
    Deterministic,
}

impl RewardFamily {
    /// Draws a reward with the given mean. Bernoulli consumes one uniform,
    /// deterministic rewards consume nothing.
    pub fn sample<R: Rng + ?Sized>(self, mean: f64, rng: &mut R) -> f64 {
        match self {
            RewardFamily::Bernoulli => {
                if rng.random::<f64>() < mean {
                    1.0
                } else {
                    0.0
                }
            }
            RewardFamily::Deterministic => mean,
        }
    }
}

/// Means, reward family and the declared variation budget `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    means: MeanRewardMatrix,
    family: RewardFamily,
    budget: f64,
}

impl BanditInstance {
    /// Fails unless the measured variation of `means` is within `budget`.
    pub fn new(means: MeanRewardMatrix, family: RewardFamily, budget: f64) -> Result<Self> {
        if !(budget >= 0.0) || !budget.is_finite() {
            return Err(Error::InvalidMeans(format!("budget {budget} must be finite and >= 0")));
        }
        let variation = measure_variation(&means);
        // Rounding slack for budgets reached with equality.
        let slack = 1e-12 * budget.max(1.0);
        if variation > budget + slack {
            return Err(Error::BudgetAssumptionViolated(format!(
                "measured variation {variation} exceeds declared budget {budget}"
            )));
        }
        Ok(Self { means, family, budget })
    }

    pub fn means(&self) -> &MeanRewardMatrix {
        &self.means
    }

    pub fn family(&self) -> RewardFamily {
        self.family
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn horizon(&self) -> usize {
        self.means.horizon()
    }

    pub fn arms(&self) -> usize {
        self.means.arms()
    }

    pub fn with_family(mut self, family: RewardFamily) -> Self {
        self.family = family;
        self
    }
}

/// Renders an instance and its partition in the instance file format.
pub fn render_instance(instance: &BanditInstance, partition: &WindowPartition) -> Result<String> {
    if partition.horizon() != instance.horizon() {
        return Err(Error::HorizonMismatch {
            expected: instance.horizon(),
            actual: partition.horizon(),
        });
    }
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", instance.horizon(), instance.arms(), g17(instance.budget()));
    let sizes: Vec<String> = partition.sizes().iter().map(|w| w.to_string()).collect();
    let _ = writeln!(out, "{}", sizes.join(" "));
    for row in instance.means().rows() {
        let cells: Vec<String> = row.iter().map(|&m| g17(m)).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    Ok(out)
}

/// Parses the instance file format.
pub fn parse_instance(text: &str) -> Result<(BanditInstance, WindowPartition)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let parse_err = |line: usize, message: String| Error::Parse { line: line + 1, message };

    let (n, header) = lines.next().ok_or_else(|| parse_err(0, "missing header".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(parse_err(n, format!("expected `T K V`, got {:?}", header)));
    }
    let horizon: usize = fields[0].parse().map_err(|e| parse_err(n, format!("T: {e}")))?;
    let arms: usize = fields[1].parse().map_err(|e| parse_err(n, format!("K: {e}")))?;
    let budget: f64 = fields[2].parse().map_err(|e| parse_err(n, format!("V: {e}")))?;

    let (n, windows) = lines.next().ok_or_else(|| parse_err(1, "missing window sizes".into()))?;
    let sizes = windows
        .split_whitespace()
        .map(|s| s.parse::<usize>().map_err(|e| parse_err(n, format!("window size {s:?}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let partition = WindowPartition::new(sizes, horizon)?;

    let mut data = Vec::with_capacity(horizon * arms);
    let mut rows = 0usize;
    for (n, line) in lines {
        let before = data.len();
        for cell in line.split_whitespace() {
            let value: f64 = cell.parse().map_err(|e| parse_err(n, format!("mean {cell:?}: {e}")))?;
            if !(0.0..=1.0).contains(&value) {
                return Err(parse_err(n, format!("mean {value} outside [0, 1]")));
            }
            data.push(value);
        }
        if data.len() - before != arms {
            return Err(parse_err(n, format!("expected {arms} means, got {}", data.len() - before)));
        }
        rows += 1;
    }
    if rows != horizon {
        return Err(Error::HorizonMismatch { expected: horizon, actual: rows });
    }
    let means = MeanRewardMatrix::new(horizon, arms, data)?;
    let instance = BanditInstance::new(means, RewardFamily::Bernoulli, budget)?;
    Ok((instance, partition))
}

pub fn write_instance(
    path: impl AsRef<Path>,
    instance: &BanditInstance,
    partition: &WindowPartition,
) -> Result<()> {
    fs::write(path, render_instance(instance, partition)?)?;
    Ok(())
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<(BanditInstance, WindowPartition)> {
    parse_instance(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block() -> BanditInstance {
        let m = MeanRewardMatrix::from_rows(&[[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 1.0]]).unwrap();
        BanditInstance::new(m, RewardFamily::Deterministic, 1.0).unwrap()
    }

    #[test]
    fn rejects_out_of_range_and_one_arm() {
        assert!(matches!(
            MeanRewardMatrix::from_rows(&[[0.5, 1.5]]),
            Err(Error::MeanOutOfRange { period: 0, arm: 1, .. })
        ));
        assert!(MeanRewardMatrix::from_rows(&[[0.5]]).is_err());
        assert!(MeanRewardMatrix::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn budget_membership_enforced() {
        let m = MeanRewardMatrix::from_rows(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(
            BanditInstance::new(m.clone(), RewardFamily::Bernoulli, 0.5),
            Err(Error::BudgetAssumptionViolated(_))
        ));
        assert!(BanditInstance::new(m, RewardFamily::Bernoulli, 1.0).is_ok());
    }

    #[test]
    fn file_round_trip() {
        let inst = block();
        let part = WindowPartition::new(vec![2, 2], 4).unwrap();
        let text = render_instance(&inst, &part).unwrap();
        assert_eq!(text, "4 2 1\n2 2\n1 0\n1 0\n0 1\n0 1\n");
        let (back, p) = parse_instance(&text).unwrap();
        assert_eq!(back.means(), inst.means());
        assert_eq!(p, part);
        assert_eq!(back.family(), RewardFamily::Bernoulli);
    }

    #[test]
    fn reader_rejects_bad_files() {
        assert!(parse_instance("2 2 0\n2\n0.5 1.2\n0.5 0.5\n").is_err());
        assert!(parse_instance("2 2 0\n2\n0.5 0.5\n").is_err());
        assert!(parse_instance("2 2 0\n1 2\n0.5 0.5\n0.5 0.5\n").is_err());
        assert!(parse_instance("2 2\n2\n0.5 0.5\n0.5 0.5\n").is_err());
        assert!(parse_instance("2 2 0\n2\n0.5\n0.5 0.5\n").is_err());
    }

    #[test]
    fn bernoulli_and_deterministic_sampling() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        assert_eq!(RewardFamily::Deterministic.sample(0.3, &mut rng), 0.3);
        assert_eq!(RewardFamily::Bernoulli.sample(0.0, &mut rng), 0.0);
        assert_eq!(RewardFamily::Bernoulli.sample(1.0, &mut rng), 1.0);
        let hits: f64 = (0..10_000).map(|_| RewardFamily::Bernoulli.sample(0.25, &mut rng)).sum();
        assert!((hits / 10_000.0 - 0.25).abs() < 0.02);
    }
}
