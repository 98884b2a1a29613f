//! Learning to plan multi-stage processes where any stage failure aborts the
//! whole round and only the first failure is observed.
//!
//! An instance is an `m x k` matrix of success probabilities. Each round a
//! planner picks one action per stage; the round pays 1 if every stage
//! succeeds. Regret is measured against the product of the row maxima.
//!
//! ```
//! use sfipp::ProbabilityMatrix;
//!
//! let p = ProbabilityMatrix::from_rows(&[
//!     [0.2, 0.7, 0.4, 0.1],
//!     [0.3, 0.5, 0.8, 0.6],
//!     [0.9, 0.75, 0.1, 0.1],
//! ])
//! .unwrap();
//! let (best, value) = p.optimal_sequence();
//! assert_eq!(best.as_slice(), &[1, 2, 0]);
//! assert!((value - 0.504).abs() < 1e-12);
//! ```

pub mod bandit;
pub mod env;
pub mod error;
pub mod experiment;
pub mod gen;
pub mod instance;
pub mod model;
pub mod oracle;
pub mod planner;
pub mod report;
pub mod staged;

pub use bandit::{Bandit, Ucb};
pub use env::{play_round, stage_result, Environment, SeededRng};
pub use error::{Error, Result};
pub use experiment::{
    run_experiment, Algorithm, ExperimentConfig, ExperimentOutput, Preset, TypeScheme,
};
pub use gen::{gen_beta, gen_deterministic, relabel_for_stage_types, BetaParams};
pub use instance::Instance;
pub use model::{ActionSequence, ProbabilityMatrix, RegretTrace, RoundOutcome, StageTypeMap};
pub use planner::{run_planner, Planner, UniformThenFixed};
pub use report::{summarize_csv, write_csv, Summary};
pub use staged::{StagedBandit, StagedCollapsedBandit, StagedCollapsedFineGrainedBandit};
