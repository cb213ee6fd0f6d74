use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::partition::WindowPartition;

/// Default replication count.
pub const DEFAULT_REPS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    /// One EXP3 run over the horizon with `gamma = we3_gamma(T, K)`.
    Exp3,
    We3,
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp3" => Ok(PolicyKind::Exp3),
            "we3" => Ok(PolicyKind::We3),
            other => Err(Error::ConfigInvalid(format!("unknown policy {other:?} (expected exp3 or we3)"))),
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolicyKind::Exp3 => "exp3",
            PolicyKind::We3 => "we3",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// Small-window hard instances, fresh draw per replication.
    LbCase1,
    /// Large-window hard instances, fresh draw per replication.
    LbCase2,
    /// Constant Bernoulli means.
    Stationary(Vec<f64>),
    /// Instance and partition read from an instance file.
    File(PathBuf),
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::LbCase1 => "lb_case1",
            Generator::LbCase2 => "lb_case2",
            Generator::Stationary(_) => "stationary",
            Generator::File(_) => "file",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Windows {
    /// Windows of width `W`; a trailing remainder forms a shorter window.
    Uniform(usize),
    Explicit(Vec<usize>),
}

/// One experiment point.
///
/// Configs can be read from a plain-text file of `key = value` lines (`#`
/// starts a comment). Keys: `K`, `T`, `V`, `W` (uniform width), `windows`
/// (explicit sizes, comma or space separated), `reps`, `seed`, `policy`
/// (`exp3`/`we3`), `generator` (`lb_case1`/`lb_case2`/`stationary`/`file`),
/// `means` (stationary arm means) and `instance` (instance file path).
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub arms: usize,
    pub horizon: usize,
    pub budget: f64,
    pub windows: Windows,
    pub reps: usize,
    pub seed: u64,
    pub policy: PolicyKind,
    pub generator: Generator,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            arms: 10,
            horizon: 50_000,
            budget: 50.0,
            windows: Windows::Uniform(20),
            reps: DEFAULT_REPS,
            seed: 0,
            policy: PolicyKind::We3,
            generator: Generator::LbCase1,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| Error::ConfigInvalid(format!("{key} = {value:?}: {e}")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(key, s))
        .collect()
}

impl ExperimentConfig {
    /// Sets one key; unknown keys are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "K" => self.arms = parse_num(key, value)?,
            "T" => self.horizon = parse_num(key, value)?,
            "V" => self.budget = parse_num(key, value)?,
            "W" => self.windows = Windows::Uniform(parse_num(key, value)?),
            "windows" => self.windows = Windows::Explicit(parse_list(key, value)?),
            "reps" => self.reps = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "policy" => self.policy = value.trim().parse()?,
            "generator" => {
                self.generator = match value.trim() {
                    "lb_case1" | "1" => Generator::LbCase1,
                    "lb_case2" | "2" => Generator::LbCase2,
                    "stationary" => match &self.generator {
                        Generator::Stationary(m) => Generator::Stationary(m.clone()),
                        _ => Generator::Stationary(Vec::new()),
                    },
                    "file" => match &self.generator {
                        Generator::File(p) => Generator::File(p.clone()),
                        _ => Generator::File(PathBuf::new()),
                    },
                    other => return Err(Error::ConfigInvalid(format!("unknown generator {other:?}"))),
                }
            }
            "means" => self.generator = Generator::Stationary(parse_list(key, value)?),
            "instance" => self.generator = Generator::File(PathBuf::from(value.trim())),
            other => return Err(Error::ConfigInvalid(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`.
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: n + 1,
                message: format!("expected key = value, got {raw:?}"),
            })?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn from_kv(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_kv(text)?;
        Ok(cfg)
    }

    /// Renders the config in the `key = value` format.
    pub fn to_kv(&self) -> String {
        let mut out = format!("K = {}\nT = {}\nV = {}\n", self.arms, self.horizon, crate::format::g17(self.budget));
        match &self.windows {
            Windows::Uniform(w) => out += &format!("W = {w}\n"),
            Windows::Explicit(sizes) => {
                let s: Vec<String> = sizes.iter().map(|w| w.to_string()).collect();
                out += &format!("windows = {}\n", s.join(","));
            }
        }
        out += &format!("reps = {}\nseed = {}\npolicy = {}\n", self.reps, self.seed, self.policy);
        match &self.generator {
            Generator::Stationary(m) => {
                let s: Vec<String> = m.iter().map(|x| crate::format::g17(*x)).collect();
                out += &format!("means = {}\n", s.join(","));
            }
            Generator::File(p) => out += &format!("instance = {}\n", p.display()),
            g => out += &format!("generator = {}\n", g.name()),
        }
        out
    }

    /// Partition implied by `windows` and `horizon`.
    pub fn partition(&self) -> Result<WindowPartition> {
        match &self.windows {
            Windows::Uniform(w) => WindowPartition::uniform(*w, self.horizon),
            Windows::Explicit(sizes) => WindowPartition::new(sizes.clone(), self.horizon),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::ConfigInvalid("reps must be at least 1".into()));
        }
        if let Generator::File(_) = self.generator {
            return Ok(());
        }
        if self.arms < 2 {
            return Err(Error::ConfigInvalid(format!("K = {} must be at least 2", self.arms)));
        }
        if self.horizon == 0 {
            return Err(Error::ConfigInvalid("T must be positive".into()));
        }
        if !(self.budget >= 0.0) || !self.budget.is_finite() {
            return Err(Error::ConfigInvalid(format!("V = {} must be finite and >= 0", self.budget)));
        }
        if let Generator::Stationary(m) = &self.generator {
            if m.len() != self.arms {
                return Err(Error::ConfigInvalid(format!("{} stationary means for K = {}", m.len(), self.arms)));
            }
        }
        self.partition()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_round_trip() {
        let text = "# sweep base\nK = 10\nT = 20000\nV = 50\nW = 400\nreps = 3\nseed = 9\npolicy = we3\ngenerator = lb_case2\n";
        let cfg = ExperimentConfig::from_kv(text).unwrap();
        assert_eq!(cfg.arms, 10);
        assert_eq!(cfg.windows, Windows::Uniform(400));
        assert_eq!(cfg.generator, Generator::LbCase2);
        assert_eq!(ExperimentConfig::from_kv(&cfg.to_kv()).unwrap(), cfg);

        let st = ExperimentConfig::from_kv("K=2\nT=100\nV=0\nmeans=0.7, 0.5\npolicy=exp3\nwindows=50 50").unwrap();
        assert_eq!(st.generator, Generator::Stationary(vec![0.7, 0.5]));
        assert_eq!(st.windows, Windows::Explicit(vec![50, 50]));
        assert_eq!(ExperimentConfig::from_kv(&st.to_kv()).unwrap(), st);
    }

    #[test]
    fn kv_errors() {
        assert!(ExperimentConfig::from_kv("bogus = 1").is_err());
        assert!(ExperimentConfig::from_kv("K 10").is_err());
        assert!(ExperimentConfig::from_kv("K = ten").is_err());
        assert!(ExperimentConfig::from_kv("policy = ucb").is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.reps = 0;
        assert!(matches!(cfg.validate(), Err(Error::ConfigInvalid(_))));
        cfg.reps = 1;
        cfg.generator = Generator::Stationary(vec![0.5]);
        assert!(cfg.validate().is_err());
    }
}
