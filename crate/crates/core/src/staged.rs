//! Bandit-per-stage planners for probabilistic instances.
//!
//! * [`StagedBandit`] keeps one bandit per stage.
//! * [`StagedCollapsedBandit`] keeps one bandit per stage type, plays one
//!   action for every stage of the type, and rewards the type's bandit only
//!   on whether all of its stages got through.
//! * [`StagedCollapsedFineGrainedBandit`] keeps one bandit per stage type but
//!   queries and rewards it at every stage.

use crate::bandit::{Bandit, Ucb};
use crate::error::Result;
use crate::model::{RoundOutcome, StageTypeMap};
use crate::planner::Planner;

/// One independent bandit per stage.
#[derive(Debug, Clone)]
pub struct StagedBandit<B = Ucb> {
    bandits: Vec<B>,
    played: Vec<Option<usize>>,
}

impl StagedBandit<Ucb> {
    pub fn new(m: usize, k: usize) -> Self {
        Self::with_bandits((0..m).map(|_| Ucb::new(k)).collect())
    }
}

impl<B: Bandit> StagedBandit<B> {
    pub fn with_bandits(bandits: Vec<B>) -> Self {
        let m = bandits.len();
        Self {
            bandits,
            played: vec![None; m],
        }
    }

    pub fn bandits(&self) -> &[B] {
        &self.bandits
    }
}

impl<B: Bandit> Planner for StagedBandit<B> {
    fn begin_round(&mut self) {
        self.played.fill(None);
    }

    fn next_action(&mut self, stage: usize) -> usize {
        let action = self.bandits[stage].select();
        self.played[stage] = Some(action);
        action
    }

    fn intended_action(&self, stage: usize) -> usize {
        self.played[stage].unwrap_or_else(|| self.bandits[stage].select())
    }

    fn report(&mut self, outcome: RoundOutcome) -> Result<()> {
        let reached = outcome.stages_played(self.bandits.len());
        for stage in 0..reached {
            let action = self.played[stage].expect("reached stage was played");
            let reward = outcome != RoundOutcome::FailedAt(stage);
            self.bandits[stage].update(action, reward)?;
        }
        Ok(())
    }
}

/// One bandit per stage type acting on the product of the type's stages.
#[derive(Debug, Clone)]
pub struct StagedCollapsedBandit<B = Ucb> {
    types: StageTypeMap,
    group_sizes: Vec<usize>,
    bandits: Vec<B>,
    committed: Vec<Option<usize>>,
    played: Vec<Option<usize>>,
}

impl StagedCollapsedBandit<Ucb> {
    pub fn new(types: StageTypeMap, k: usize) -> Self {
        let bandits = (0..types.type_count()).map(|_| Ucb::new(k)).collect();
        Self::with_bandits(types, bandits)
    }
}

impl<B: Bandit> StagedCollapsedBandit<B> {
    /// `bandits[j]` serves stage type `j`.
    pub fn with_bandits(types: StageTypeMap, bandits: Vec<B>) -> Self {
        assert_eq!(
            bandits.len(),
            types.type_count(),
            "need one bandit per stage type"
        );
        let group_sizes = types.groups().iter().map(Vec::len).collect();
        let m = types.stages();
        let l = types.type_count();
        Self {
            types,
            group_sizes,
            bandits,
            committed: vec![None; l],
            played: vec![None; m],
        }
    }

    pub fn bandits(&self) -> &[B] {
        &self.bandits
    }

    pub fn types(&self) -> &StageTypeMap {
        &self.types
    }
}

impl<B: Bandit> Planner for StagedCollapsedBandit<B> {
    fn begin_round(&mut self) {
        self.committed.fill(None);
        self.played.fill(None);
    }

    fn next_action(&mut self, stage: usize) -> usize {
        let j = self.types.type_of(stage);
        let action = match self.committed[j] {
            Some(action) => action,
            None => {
                let action = self.bandits[j].select();
                self.committed[j] = Some(action);
                action
            }
        };
        self.played[stage] = Some(action);
        action
    }

    fn intended_action(&self, stage: usize) -> usize {
        let j = self.types.type_of(stage);
        self.played[stage]
            .or(self.committed[j])
            .unwrap_or_else(|| self.bandits[j].select())
    }

    fn report(&mut self, outcome: RoundOutcome) -> Result<()> {
        match outcome {
            RoundOutcome::Success => {
                for (bandit, action) in self.bandits.iter_mut().zip(&self.committed) {
                    bandit.update(action.expect("every type played on success"), true)?;
                }
            }
            RoundOutcome::FailedAt(failed) => {
                let mut completed = vec![0usize; self.group_sizes.len()];
                for stage in 0..failed {
                    completed[self.types.type_of(stage)] += 1;
                }
                let failed_type = self.types.type_of(failed);
                for (j, bandit) in self.bandits.iter_mut().enumerate() {
                    let Some(action) = self.committed[j] else {
                        continue;
                    };
                    if j == failed_type {
                        bandit.update(action, false)?;
                    } else if completed[j] == self.group_sizes[j] {
                        bandit.update(action, true)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// One bandit per stage type, queried and rewarded at every stage.
#[derive(Debug, Clone)]
pub struct StagedCollapsedFineGrainedBandit<B = Ucb> {
    types: StageTypeMap,
    bandits: Vec<B>,
    played: Vec<Option<usize>>,
}

impl StagedCollapsedFineGrainedBandit<Ucb> {
    pub fn new(types: StageTypeMap, k: usize) -> Self {
        let bandits = (0..types.type_count()).map(|_| Ucb::new(k)).collect();
        Self::with_bandits(types, bandits)
    }
}

impl<B: Bandit> StagedCollapsedFineGrainedBandit<B> {
    pub fn with_bandits(types: StageTypeMap, bandits: Vec<B>) -> Self {
        assert_eq!(
            bandits.len(),
            types.type_count(),
            "need one bandit per stage type"
        );
        let m = types.stages();
        Self {
            types,
            bandits,
            played: vec![None; m],
        }
    }

    pub fn bandits(&self) -> &[B] {
        &self.bandits
    }

    fn reward(&mut self, stage: usize, success: bool) -> Result<()> {
        let action = self.played[stage].expect("rewarded stage was played");
        self.bandits[self.types.type_of(stage)].update(action, success)
    }
}

impl<B: Bandit> Planner for StagedCollapsedFineGrainedBandit<B> {
    fn begin_round(&mut self) {
        self.played.fill(None);
    }

    fn next_action(&mut self, stage: usize) -> usize {
        // Being asked for this stage means the previous one succeeded.
        if stage > 0 {
            self.reward(stage - 1, true)
                .expect("played actions come from the bandit itself");
        }
        let action = self.bandits[self.types.type_of(stage)].select();
        self.played[stage] = Some(action);
        action
    }

    fn intended_action(&self, stage: usize) -> usize {
        self.played[stage].unwrap_or_else(|| self.bandits[self.types.type_of(stage)].select())
    }

    fn report(&mut self, outcome: RoundOutcome) -> Result<()> {
        match outcome {
            RoundOutcome::Success => self.reward(self.played.len() - 1, true),
            RoundOutcome::FailedAt(stage) => self.reward(stage, false),
        }
    }
}
