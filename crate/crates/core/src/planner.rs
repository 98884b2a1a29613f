//! The round protocol shared by every planner, the driver that runs it
//! against an environment, and `UniformThenFixed` for binary instances.

use crate::env::{Environment, SeededRng};
use crate::error::{Error, Result};
use crate::model::{ProbabilityMatrix, RoundOutcome};

/// A planner interacting with the first-failure environment.
///
/// Per round the driver calls `begin_round`, then `next_action` for stages
/// `0, 1, ...` until a stage fails or all stages succeed, then `report` once.
/// `next_action(s)` is only called when stages `0..s` succeeded this round.
pub trait Planner {
    fn begin_round(&mut self);

    fn next_action(&mut self, stage: usize) -> usize;

    /// The action this planner would play at `stage` right now, without
    /// changing any state. For stages already played this round it returns
    /// the action that was played.
    fn intended_action(&self, stage: usize) -> usize;

    fn report(&mut self, outcome: RoundOutcome) -> Result<()>;
}

impl<P: Planner + ?Sized> Planner for Box<P> {
    fn begin_round(&mut self) {
        (**self).begin_round()
    }

    fn next_action(&mut self, stage: usize) -> usize {
        (**self).next_action(stage)
    }

    fn intended_action(&self, stage: usize) -> usize {
        (**self).intended_action(stage)
    }

    fn report(&mut self, outcome: RoundOutcome) -> Result<()> {
        (**self).report(outcome)
    }
}

/// Result of one driven round.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayedRound {
    pub outcome: RoundOutcome,
    /// Played actions for reached stages, intended actions for the rest.
    pub actions: Vec<usize>,
}

/// Runs one round of `planner` against the instance.
pub fn play_planned_round<P: Planner + ?Sized>(
    matrix: &ProbabilityMatrix,
    planner: &mut P,
    rng: &mut SeededRng,
) -> Result<PlayedRound> {
    let m = matrix.stages();
    let mut actions = Vec::with_capacity(m);
    let mut env = Environment::new(matrix, rng);
    planner.begin_round();
    let mut outcome = RoundOutcome::Success;
    for stage in 0..m {
        let action = planner.next_action(stage);
        if action >= matrix.actions() {
            return Err(Error::ActionOutOfRange {
                stage,
                action,
                k: matrix.actions(),
            });
        }
        actions.push(action);
        if !env.attempt(stage, action) {
            outcome = RoundOutcome::FailedAt(stage);
            break;
        }
    }
    for stage in actions.len()..m {
        actions.push(planner.intended_action(stage));
    }
    planner.report(outcome)?;
    Ok(PlayedRound { outcome, actions })
}

/// Runs `rounds` rounds and returns the cumulative pseudo-regret after each.
///
/// Regret is computed from the true matrix and the full action sequence, so
/// unreached stages never consult the environment's randomness.
pub fn run_planner<P: Planner + ?Sized>(
    matrix: &ProbabilityMatrix,
    planner: &mut P,
    rng: &mut SeededRng,
    rounds: usize,
) -> Result<Vec<f64>> {
    let (_, best) = matrix.optimal_sequence();
    let mut cumulative = Vec::with_capacity(rounds);
    let mut total = 0.0;
    for _ in 0..rounds {
        let played = play_planned_round(matrix, planner, rng)?;
        let achieved = matrix.success_probability_unchecked(&played.actions);
        total += (best - achieved).max(0.0);
        cumulative.push(total);
    }
    Ok(cumulative)
}

/// What `UniformThenFixed` knows about one (stage, action) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Knowledge {
    Unexplored,
    KnownZero,
    KnownOne,
}

/// Tries unexplored actions uniformly at random until a stage's first
/// success, then replays that action forever.
///
/// Meant for binary instances; on probabilistic instances a known-good
/// action will eventually fail and `report` returns
/// [`Error::CorruptedEnvironment`].
#[derive(Debug, Clone, PartialEq)]
pub struct UniformThenFixed {
    k: usize,
    knowledge: Vec<Knowledge>,
    played: Vec<Option<usize>>,
    rng: SeededRng,
}

impl UniformThenFixed {
    pub fn new(m: usize, k: usize, rng: SeededRng) -> Self {
        Self {
            k,
            knowledge: vec![Knowledge::Unexplored; m * k],
            played: vec![None; m],
            rng,
        }
    }

    pub fn knowledge(&self, stage: usize, action: usize) -> Knowledge {
        self.knowledge[stage * self.k + action]
    }

    fn stage_knowledge(&self, stage: usize) -> &[Knowledge] {
        &self.knowledge[stage * self.k..(stage + 1) * self.k]
    }

    fn known_success(&self, stage: usize) -> Option<usize> {
        self.stage_knowledge(stage)
            .iter()
            .position(|&x| x == Knowledge::KnownOne)
    }

    fn mark(&mut self, stage: usize, action: usize, succeeded: bool) -> Result<()> {
        let slot = &mut self.knowledge[stage * self.k + action];
        let new = if succeeded {
            Knowledge::KnownOne
        } else {
            Knowledge::KnownZero
        };
        match (*slot, new) {
            (Knowledge::Unexplored, _) => *slot = new,
            (old, new) if old == new => {}
            _ => return Err(Error::CorruptedEnvironment { stage, action }),
        }
        Ok(())
    }
}

impl Planner for UniformThenFixed {
    fn begin_round(&mut self) {
        self.played.fill(None);
    }

    fn next_action(&mut self, stage: usize) -> usize {
        let action = match self.known_success(stage) {
            Some(action) => action,
            None => {
                let unexplored: Vec<usize> = self
                    .stage_knowledge(stage)
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x == Knowledge::Unexplored)
                    .map(|(a, _)| a)
                    .collect();
                if unexplored.is_empty() {
                    // Every action is known to fail; no action can succeed here.
                    0
                } else {
                    unexplored[self.rng.below(unexplored.len())]
                }
            }
        };
        self.played[stage] = Some(action);
        action
    }

    fn intended_action(&self, stage: usize) -> usize {
        if let Some(action) = self.played[stage] {
            return action;
        }
        self.known_success(stage)
            .or_else(|| {
                self.stage_knowledge(stage)
                    .iter()
                    .position(|&x| x == Knowledge::Unexplored)
            })
            .unwrap_or(0)
    }

    fn report(&mut self, outcome: RoundOutcome) -> Result<()> {
        let reached = outcome.stages_played(self.played.len());
        for stage in 0..reached {
            let action = self.played[stage].expect("reached stage was played");
            let succeeded = outcome != RoundOutcome::FailedAt(stage);
            self.mark(stage, action, succeeded)?;
        }
        Ok(())
    }
}
