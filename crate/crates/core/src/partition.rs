//! Window partitions of the horizon.

use std::ops::Range;

use crate::error::{Error, Result};

/// Positive window sizes `W_1, ..., W_N` summing to the horizon `T`.
///
/// Windows are stored with 0-based half-open period ranges; window `j`
/// covers periods `offsets[j]..offsets[j + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowPartition {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
}

impl WindowPartition {
    /// Validates `sizes` against the horizon.
    pub fn new(sizes: Vec<usize>, horizon: usize) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::EmptyPartition);
        }
        if let Some(index) = sizes.iter().position(|&w| w == 0) {
            return Err(Error::NonPositiveWindow { index });
        }
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        offsets.push(0);
        let mut sum = 0usize;
        for &w in &sizes {
            sum = sum.saturating_add(w);
            offsets.push(sum);
        }
        if sum != horizon {
            return Err(Error::SumMismatch { sum, horizon });
        }
        Ok(Self { sizes, offsets })
    }

    /// One window covering the whole horizon (static oracle).
    pub fn single(horizon: usize) -> Result<Self> {
        Self::new(vec![horizon], horizon)
    }

    /// Unit windows (dynamic oracle).
    pub fn unit(horizon: usize) -> Result<Self> {
        Self::new(vec![1; horizon], horizon)
    }

    /// Windows of size `width`; a trailing shorter window takes the remainder
    /// when `width` does not divide `horizon`.
    pub fn uniform(width: usize, horizon: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::NonPositiveWindow { index: 0 });
        }
        if horizon == 0 {
            return Err(Error::EmptyPartition);
        }
        let mut sizes = vec![width; horizon / width];
        if horizon % width != 0 {
            sizes.push(horizon % width);
        }
        Self::new(sizes, horizon)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of windows `N`.
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Horizon `T`.
    pub fn horizon(&self) -> usize {
        *self.offsets.last().expect("offsets are never empty")
    }

    /// 0-based period range of window `j`.
    pub fn window(&self, j: usize) -> Range<usize> {
        self.offsets[j]..self.offsets[j + 1]
    }

    pub fn windows(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.offsets.windows(2).map(|w| w[0]..w[1])
    }

    /// Index of the window containing 0-based period `t`.
    pub fn window_of(&self, t: usize) -> Option<usize> {
        if t >= self.horizon() {
            return None;
        }
        Some(self.offsets.partition_point(|&o| o <= t) - 1)
    }

    /// Splits window `j` after `left` periods. Returns `None` unless
    /// `0 < left < W_j`.
    pub fn split(&self, j: usize, left: usize) -> Option<Self> {
        let w = *self.sizes.get(j)?;
        if left == 0 || left >= w {
            return None;
        }
        let mut sizes = self.sizes.clone();
        sizes[j] = left;
        sizes.insert(j + 1, w - left);
        Self::new(sizes, self.horizon()).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_windows_of_two() {
        let p = WindowPartition::new(vec![2, 2], 4).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.window(0), 0..2);
        assert_eq!(p.window(1), 2..4);
        assert_eq!(p.window_of(3), Some(1));
        assert_eq!(p.window_of(4), None);
    }

    #[test]
    fn single_window() {
        let p = WindowPartition::new(vec![4], 4).unwrap();
        assert_eq!(p, WindowPartition::single(4).unwrap());
        assert_eq!(p.windows().collect::<Vec<_>>(), vec![0..4]);
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(matches!(
            WindowPartition::new(vec![2, 3], 4),
            Err(Error::SumMismatch { sum: 5, horizon: 4 })
        ));
        assert!(matches!(WindowPartition::new(vec![], 0), Err(Error::EmptyPartition)));
        assert!(matches!(
            WindowPartition::new(vec![2, 0, 2], 4),
            Err(Error::NonPositiveWindow { index: 1 })
        ));
    }

    #[test]
    fn uniform_with_remainder() {
        let p = WindowPartition::uniform(600, 20_000).unwrap();
        assert_eq!(p.len(), 34);
        assert_eq!(*p.sizes().last().unwrap(), 200);
        let q = WindowPartition::uniform(20, 100).unwrap();
        assert_eq!(q.sizes(), &[20; 5]);
    }

    #[test]
    fn split_preserves_horizon() {
        let p = WindowPartition::new(vec![3, 5], 8).unwrap();
        let q = p.split(1, 2).unwrap();
        assert_eq!(q.sizes(), &[3, 2, 3]);
        assert!(p.split(0, 3).is_none());
    }
}
