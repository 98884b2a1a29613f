//! First-failure environment and seeded random streams.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{ActionSequence, ProbabilityMatrix, RoundOutcome};

/// A single-owner random stream that counts the uniform draws it hands out.
#[derive(Debug, Clone, PartialEq)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
    draws: u64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
            draws: 0,
        }
    }

    /// Child stream keyed by a master seed and a path of labels.
    pub fn derive(master: u64, path: &[&str]) -> Self {
        Self::new(derive_seed(master, path))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of [`uniform`](Self::uniform) draws consumed so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.draws += 1;
        self.inner.gen::<f64>()
    }

    /// Uniform index in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

/// Hashes a master seed and label path into a child seed.
pub fn derive_seed(master: u64, path: &[&str]) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    for part in path {
        hasher.update((part.len() as u64).to_le_bytes());
        hasher.update(part.as_bytes());
    }
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
}

/// Bernoulli outcome of one stage. Always consumes one uniform draw.
pub fn stage_result(p: f64, rng: &mut SeededRng) -> Result<bool> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(rng.uniform() < p)
}

/// Plays a full fixed sequence, stopping at the first failing stage.
pub fn play_round(
    matrix: &ProbabilityMatrix,
    seq: &ActionSequence,
    rng: &mut SeededRng,
) -> Result<RoundOutcome> {
    matrix.check_sequence(seq)?;
    let mut env = Environment::new(matrix, rng);
    for (stage, &action) in seq.as_slice().iter().enumerate() {
        if !env.attempt(stage, action) {
            return Ok(RoundOutcome::FailedAt(stage));
        }
    }
    Ok(RoundOutcome::Success)
}

/// Stage-by-stage access to an instance, for planners that choose lazily.
pub struct Environment<'a> {
    matrix: &'a ProbabilityMatrix,
    rng: &'a mut SeededRng,
}

impl<'a> Environment<'a> {
    pub fn new(matrix: &'a ProbabilityMatrix, rng: &'a mut SeededRng) -> Self {
        Self { matrix, rng }
    }

    /// Draws the outcome of `action` at `stage`.
    ///
    /// Panics if the indices are out of range.
    pub fn attempt(&mut self, stage: usize, action: usize) -> bool {
        self.rng.uniform() < self.matrix.get(stage, action)
    }

    pub fn matrix(&self) -> &ProbabilityMatrix {
        self.matrix
    }
}
