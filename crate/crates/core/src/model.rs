//! Instance types and exact regret arithmetic.
//!
//! An instance is an `m x k` matrix of per-stage, per-action success
//! probabilities. A round succeeds only when every stage succeeds, so the
//! success probability of an action sequence is the product of the chosen
//! entries. Stages and actions are 0-indexed throughout the crate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-stage, per-action success probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct ProbabilityMatrix {
    m: usize,
    k: usize,
    entries: Vec<f64>,
    deterministic: bool,
}

impl ProbabilityMatrix {
    /// Builds a matrix from rows, rejecting ragged input and entries outside `[0, 1]`.
    ///
    /// The matrix is flagged deterministic automatically when every entry is 0 or 1.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let k = rows.first().map_or(0, |r| r.as_ref().len());
        if m == 0 || k == 0 {
            return Err(Error::EmptyMatrix { m, k });
        }
        let mut entries = Vec::with_capacity(m * k);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != k {
                return Err(Error::RaggedRow {
                    row,
                    len: r.len(),
                    k,
                });
            }
            for (col, &value) in r.iter().enumerate() {
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::InvalidProbability { row, col, value });
                }
                entries.push(value);
            }
        }
        let deterministic = entries.iter().all(|&p| p == 0.0 || p == 1.0);
        Ok(Self {
            m,
            k,
            entries,
            deterministic,
        })
    }

    /// Like [`from_rows`](Self::from_rows) but additionally requires a binary matrix.
    pub fn deterministic_from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let matrix = Self::from_rows(rows)?;
        if let Some(pos) = matrix.entries.iter().position(|&p| p != 0.0 && p != 1.0) {
            return Err(Error::NotBinary {
                row: pos / matrix.k,
                col: pos % matrix.k,
                value: matrix.entries[pos],
            });
        }
        Ok(matrix)
    }

    pub fn stages(&self) -> usize {
        self.m
    }

    pub fn actions(&self) -> usize {
        self.k
    }

    /// True when every entry is exactly 0 or 1.
    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn get(&self, stage: usize, action: usize) -> f64 {
        self.entries[stage * self.k + action]
    }

    pub fn row(&self, stage: usize) -> &[f64] {
        &self.entries[stage * self.k..(stage + 1) * self.k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks_exact(self.k)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    /// Number of zero entries.
    pub fn zero_count(&self) -> usize {
        self.entries.iter().filter(|&&p| p == 0.0).count()
    }

    /// Lowest-index maximizing action of a stage.
    pub fn best_action(&self, stage: usize) -> usize {
        argmax(self.row(stage))
    }

    /// Returns the per-stage argmax sequence and its success probability.
    pub fn optimal_sequence(&self) -> (ActionSequence, f64) {
        let actions: Vec<usize> = (0..self.m).map(|s| self.best_action(s)).collect();
        let value = actions
            .iter()
            .enumerate()
            .map(|(s, &a)| self.get(s, a))
            .product();
        (ActionSequence(actions), value)
    }

    /// Probability that every stage succeeds under `seq`.
    pub fn success_probability(&self, seq: &ActionSequence) -> Result<f64> {
        self.check_sequence(seq)?;
        Ok(self.success_probability_unchecked(seq.as_slice()))
    }

    pub(crate) fn success_probability_unchecked(&self, actions: &[usize]) -> f64 {
        actions
            .iter()
            .enumerate()
            .map(|(s, &a)| self.get(s, a))
            .product()
    }

    /// Optimal success probability minus the success probability of `seq`.
    pub fn per_round_regret(&self, seq: &ActionSequence) -> Result<f64> {
        let (_, best) = self.optimal_sequence();
        let achieved = self.success_probability(seq)?;
        Ok((best - achieved).max(0.0))
    }

    pub fn check_sequence(&self, seq: &ActionSequence) -> Result<()> {
        if seq.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                got: seq.len(),
            });
        }
        for (stage, &action) in seq.as_slice().iter().enumerate() {
            if action >= self.k {
                return Err(Error::ActionOutOfRange {
                    stage,
                    action,
                    k: self.k,
                });
            }
        }
        Ok(())
    }

    /// Merges all stages of each type into one row whose entries are the
    /// products of the merged rows. Output rows follow ascending type index.
    pub fn collapse(&self, types: &StageTypeMap) -> Result<ProbabilityMatrix> {
        types.check_stages(self.m)?;
        let mut rows = vec![vec![1.0; self.k]; types.type_count()];
        for (s, &j) in types.assignments().iter().enumerate() {
            for (acc, &p) in rows[j].iter_mut().zip(self.row(s)) {
                *acc *= p;
            }
        }
        ProbabilityMatrix::from_rows(&rows)
    }

    /// True when every group of same-type rows shares at least one common
    /// maximizing action.
    pub fn collapsing_is_valid(&self, types: &StageTypeMap) -> Result<bool> {
        types.check_stages(self.m)?;
        for group in types.groups() {
            let common = (0..self.k).any(|a| {
                group.iter().all(|&s| {
                    let row = self.row(s);
                    row[a] == row[argmax(row)]
                })
            });
            if !common {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl TryFrom<Vec<Vec<f64>>> for ProbabilityMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(&rows)
    }
}

impl From<ProbabilityMatrix> for Vec<Vec<f64>> {
    fn from(matrix: ProbabilityMatrix) -> Self {
        matrix.to_rows()
    }
}

impl fmt::Display for ProbabilityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|p| format!("{p:.3}")).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Lowest index of the maximum entry.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Assignment of each stage to one of `l` types. Every type is used.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StageTypeMap {
    assignments: Vec<usize>,
    types: usize,
}

impl StageTypeMap {
    pub fn new(assignments: Vec<usize>) -> Result<Self> {
        if assignments.is_empty() {
            return Err(Error::InvalidTypeMap("no stages".into()));
        }
        let types = assignments.iter().max().map_or(0, |&j| j + 1);
        let mut used = vec![false; types];
        for &j in &assignments {
            used[j] = true;
        }
        if let Some(j) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidTypeMap(format!(
                "type {j} is not assigned to any stage"
            )));
        }
        Ok(Self { assignments, types })
    }

    /// Every stage is its own type.
    pub fn identity(m: usize) -> Self {
        Self {
            assignments: (0..m).collect(),
            types: m,
        }
    }

    /// All stages share one type.
    pub fn single(m: usize) -> Self {
        Self {
            assignments: vec![0; m],
            types: 1,
        }
    }

    /// Stage `s` gets type `s mod l`; `l = 2` gives alternating odd/even stages.
    pub fn cyclic(m: usize, l: usize) -> Result<Self> {
        if l == 0 || l > m {
            return Err(Error::InvalidTypeMap(format!(
                "cannot cycle {l} types over {m} stages"
            )));
        }
        Ok(Self {
            assignments: (0..m).map(|s| s % l).collect(),
            types: l,
        })
    }

    pub fn stages(&self) -> usize {
        self.assignments.len()
    }

    pub fn type_count(&self) -> usize {
        self.types
    }

    pub fn type_of(&self, stage: usize) -> usize {
        self.assignments[stage]
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assignments
    }

    /// Stages of type `j`, ascending.
    pub fn stages_of(&self, j: usize) -> Vec<usize> {
        (0..self.stages())
            .filter(|&s| self.assignments[s] == j)
            .collect()
    }

    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.types];
        for (s, &j) in self.assignments.iter().enumerate() {
            groups[j].push(s);
        }
        groups
    }

    /// Expands a per-type sequence to a per-stage sequence.
    pub fn expand(&self, per_type: &ActionSequence) -> Result<ActionSequence> {
        if per_type.len() != self.types {
            return Err(Error::LengthMismatch {
                expected: self.types,
                got: per_type.len(),
            });
        }
        Ok(ActionSequence(
            self.assignments
                .iter()
                .map(|&j| per_type.as_slice()[j])
                .collect(),
        ))
    }

    pub(crate) fn check_stages(&self, m: usize) -> Result<()> {
        if self.stages() != m {
            return Err(Error::InvalidTypeMap(format!(
                "map covers {} stages, matrix has {m}",
                self.stages()
            )));
        }
        Ok(())
    }
}

/// One action per stage.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActionSequence(pub Vec<usize>);

impl ActionSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for ActionSequence {
    fn from(actions: Vec<usize>) -> Self {
        Self(actions)
    }
}

/// What the environment reveals after a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoundOutcome {
    Success,
    /// Earlier stages succeeded and this stage failed; later stages were not played.
    FailedAt(usize),
}

impl RoundOutcome {
    pub fn is_success(self) -> bool {
        matches!(self, RoundOutcome::Success)
    }

    /// Number of stages played this round for a process of `m` stages.
    pub fn stages_played(self, m: usize) -> usize {
        match self {
            RoundOutcome::Success => m,
            RoundOutcome::FailedAt(s) => s + 1,
        }
    }
}

/// Cumulative pseudo-regret of one run, indexed by round (entry `t` covers rounds `1..=t+1`).
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    pub algorithm: String,
    pub instance_id: usize,
    pub seed: u64,
    pub cumulative: Vec<f64>,
}

impl RegretTrace {
    pub fn final_regret(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    /// Cumulative regret after round `round` (1-based); round 0 is 0.
    pub fn at_round(&self, round: usize) -> f64 {
        if round == 0 {
            0.0
        } else {
            self.cumulative[round - 1]
        }
    }

    pub fn increments(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(0.0)
            .chain(self.cumulative.iter().copied())
            .zip(self.cumulative.iter().copied())
            .map(|(prev, next)| next - prev)
    }
}
