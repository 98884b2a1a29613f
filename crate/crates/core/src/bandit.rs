//! Single-stage Bernoulli bandits used as black boxes by the staged planners.

use crate::error::{Error, Result};

/// A Bernoulli bandit learner over `k` arms.
///
/// `select` must not change state; `update` records one pull.
pub trait Bandit {
    fn arms(&self) -> usize;

    fn select(&self) -> usize;

    fn update(&mut self, arm: usize, reward: bool) -> Result<()>;
}

/// UCB1 with per-instance time: index `mean + sqrt(2 ln t / n)` where `t`
/// counts this instance's own updates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ucb {
    pulls: Vec<u64>,
    rewards: Vec<u64>,
    total: u64,
}

impl Ucb {
    pub fn new(arms: usize) -> Self {
        assert!(arms > 0, "UCB needs at least one arm");
        Self {
            pulls: vec![0; arms],
            rewards: vec![0; arms],
            total: 0,
        }
    }

    /// Restores a state from raw counts; `rewards[i] <= pulls[i]` is required.
    pub fn from_counts(pulls: Vec<u64>, rewards: Vec<u64>) -> Result<Self> {
        if pulls.is_empty() || pulls.len() != rewards.len() {
            return Err(Error::InvalidParameter(
                "pull and reward vectors must be non-empty and equally long".into(),
            ));
        }
        if pulls.iter().zip(&rewards).any(|(n, s)| s > n) {
            return Err(Error::InvalidParameter(
                "an arm has more rewards than pulls".into(),
            ));
        }
        let total = pulls.iter().sum();
        Ok(Self {
            pulls,
            rewards,
            total,
        })
    }

    pub fn pulls(&self) -> &[u64] {
        &self.pulls
    }

    pub fn rewards(&self) -> &[u64] {
        &self.rewards
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// UCB index of an arm; infinite for unpulled arms.
    pub fn index(&self, arm: usize) -> f64 {
        let n = self.pulls[arm];
        if n == 0 {
            return f64::INFINITY;
        }
        let log_t = (self.total as f64).ln();
        self.index_with_log(arm, log_t)
    }

    fn index_with_log(&self, arm: usize, log_t: f64) -> f64 {
        let n = self.pulls[arm] as f64;
        self.rewards[arm] as f64 / n + (2.0 * log_t / n).sqrt()
    }
}

impl Bandit for Ucb {
    fn arms(&self) -> usize {
        self.pulls.len()
    }

    fn select(&self) -> usize {
        if let Some(arm) = self.pulls.iter().position(|&n| n == 0) {
            return arm;
        }
        let log_t = (self.total as f64).ln();
        let mut best = 0;
        let mut best_index = self.index_with_log(0, log_t);
        for arm in 1..self.pulls.len() {
            let index = self.index_with_log(arm, log_t);
            if index > best_index {
                best = arm;
                best_index = index;
            }
        }
        best
    }

    fn update(&mut self, arm: usize, reward: bool) -> Result<()> {
        if arm >= self.pulls.len() {
            return Err(Error::ActionOutOfRange {
                stage: 0,
                action: arm,
                k: self.pulls.len(),
            });
        }
        self.pulls[arm] += 1;
        self.rewards[arm] += u64::from(reward);
        self.total += 1;
        Ok(())
    }
}
