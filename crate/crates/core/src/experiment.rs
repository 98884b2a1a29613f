//! Experiment presets and the parallel runner.
//!
//! A preset expands into one or more *cells* (for example one per `p` value
//! of the deterministic family). Each cell generates its instances from the
//! master seed, then runs every algorithm on every instance in its own
//! random streams.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::env::{derive_seed, SeededRng};
use crate::error::{Error, Result};
use crate::gen::{gen_beta, gen_deterministic, relabel_for_stage_types, BetaParams};
use crate::instance::Instance;
use crate::model::{ProbabilityMatrix, RegretTrace, StageTypeMap};
use crate::planner::{run_planner, Planner, UniformThenFixed};
use crate::staged::{StagedBandit, StagedCollapsedBandit, StagedCollapsedFineGrainedBandit};

/// The planning algorithms available to the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// `UniformThenFixed`.
    Utf,
    /// One UCB per stage.
    Sb,
    /// Collapsed bandit with `types` stage types (1 = all stages, 2 = odd/even).
    Scb { types: usize },
    /// Fine-grained collapsed bandit with `types` stage types.
    Scfgb { types: usize },
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Utf,
        Algorithm::Sb,
        Algorithm::Scb { types: 1 },
        Algorithm::Scb { types: 2 },
        Algorithm::Scfgb { types: 1 },
        Algorithm::Scfgb { types: 2 },
    ];

    pub fn label(&self) -> String {
        match self {
            Algorithm::Utf => "UTF".into(),
            Algorithm::Sb => "SB".into(),
            Algorithm::Scb { types } => format!("SCB_{types}"),
            Algorithm::Scfgb { types } => format!("SCFGB_{types}"),
        }
    }

    /// Builds a fresh planner for an `m x k` instance.
    pub fn planner(&self, m: usize, k: usize, rng: SeededRng) -> Result<Box<dyn Planner + Send>> {
        let types = |l: usize| StageTypeMap::cyclic(m, l);
        Ok(match *self {
            Algorithm::Utf => Box::new(UniformThenFixed::new(m, k, rng)),
            Algorithm::Sb => Box::new(StagedBandit::new(m, k)),
            Algorithm::Scb { types: l } => Box::new(StagedCollapsedBandit::new(types(l)?, k)),
            Algorithm::Scfgb { types: l } => {
                Box::new(StagedCollapsedFineGrainedBandit::new(types(l)?, k))
            }
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownAlgorithm {
                name: s.to_string(),
                valid: Algorithm::ALL.map(|a| a.label()).join(", "),
            })
    }
}

/// Named experiment families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Binary instances, UTF against SB for several densities of ones.
    Det,
    /// Beta(10, 1) single-type instances with 5, 10 and 20 stages.
    CollapseGain,
    /// Beta(10, 1) single-type instances.
    ValidCollapseHi,
    /// Beta(1, 1) single-type instances.
    ValidCollapseUni,
    /// Beta(10, 1) alternating two-type instances.
    InvalidCollapseHi,
    /// Beta(1, 1) alternating two-type instances.
    InvalidCollapseUni,
    /// Everything from explicit options.
    Custom,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::Det,
        Preset::CollapseGain,
        Preset::ValidCollapseHi,
        Preset::ValidCollapseUni,
        Preset::InvalidCollapseHi,
        Preset::InvalidCollapseUni,
        Preset::Custom,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Det => "det",
            Preset::CollapseGain => "collapse-gain",
            Preset::ValidCollapseHi => "valid-collapse-hi",
            Preset::ValidCollapseUni => "valid-collapse-uni",
            Preset::InvalidCollapseHi => "invalid-collapse-hi",
            Preset::InvalidCollapseUni => "invalid-collapse-uni",
            Preset::Custom => "custom",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPreset {
                name: s.to_string(),
                valid: Preset::ALL.map(|p| p.name()).join(", "),
            })
    }
}

/// How generated instances are relabeled before planning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TypeScheme {
    /// Leave the generated matrix alone.
    None,
    /// Every stage shares the optimal action 0.
    Single,
    /// Even-indexed stages share action 0, odd-indexed stages action 1.
    Alternating,
}

impl TypeScheme {
    fn type_count(&self) -> Option<usize> {
        match self {
            TypeScheme::None => None,
            TypeScheme::Single => Some(1),
            TypeScheme::Alternating => Some(2),
        }
    }
}

impl FromStr for TypeScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(TypeScheme::None),
            "single" => Ok(TypeScheme::Single),
            "alt2" => Ok(TypeScheme::Alternating),
            other => Err(Error::InvalidParameter(format!(
                "unknown stage-type scheme `{other}` (valid: none, single, alt2)"
            ))),
        }
    }
}

/// Where instances come from.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    /// Binary matrices, one value of `p` per cell.
    Deterministic(Vec<f64>),
    Beta(BetaParams),
    /// Every instance id reuses this matrix.
    Fixed(ProbabilityMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Preset,
    /// Stage counts; one cell per value.
    pub stages: Vec<usize>,
    pub actions: usize,
    pub rounds: usize,
    pub instances: usize,
    pub source: InstanceSource,
    pub types: TypeScheme,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    /// Write every `thin`-th round (plus the last) to CSV.
    pub thin: usize,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 20_250_101;

impl ExperimentConfig {
    /// Full-scale defaults of a preset (100 instances, 10,000 rounds, k = 5).
    pub fn preset(preset: Preset) -> Self {
        let hi = BetaParams::new(10.0, 1.0).expect("valid");
        let uni = BetaParams::new(1.0, 1.0).expect("valid");
        let all_staged = vec![
            Algorithm::Sb,
            Algorithm::Scb { types: 1 },
            Algorithm::Scfgb { types: 1 },
            Algorithm::Scb { types: 2 },
            Algorithm::Scfgb { types: 2 },
        ];
        let base = Self {
            preset,
            stages: vec![20],
            actions: 5,
            rounds: 10_000,
            instances: 100,
            source: InstanceSource::Beta(hi),
            types: TypeScheme::Single,
            algorithms: all_staged.clone(),
            seed: DEFAULT_SEED,
            thin: 10,
            out: None,
        };
        match preset {
            Preset::Det => Self {
                source: InstanceSource::Deterministic(vec![0.1, 0.3, 0.5, 0.7, 0.9]),
                types: TypeScheme::None,
                algorithms: vec![Algorithm::Utf, Algorithm::Sb],
                ..base
            },
            Preset::CollapseGain => Self {
                stages: vec![5, 10, 20],
                algorithms: vec![
                    Algorithm::Sb,
                    Algorithm::Scb { types: 1 },
                    Algorithm::Scfgb { types: 1 },
                ],
                ..base
            },
            Preset::ValidCollapseHi => base,
            Preset::ValidCollapseUni => Self {
                source: InstanceSource::Beta(uni),
                ..base
            },
            Preset::InvalidCollapseHi => Self {
                types: TypeScheme::Alternating,
                ..base
            },
            Preset::InvalidCollapseUni => Self {
                source: InstanceSource::Beta(uni),
                types: TypeScheme::Alternating,
                ..base
            },
            Preset::Custom => Self {
                types: TypeScheme::None,
                algorithms: vec![Algorithm::Sb],
                ..base
            },
        }
    }

    /// Custom experiment on a fixed instance file.
    pub fn from_instance(instance: &Instance) -> Self {
        Self {
            stages: vec![instance.matrix.stages()],
            actions: instance.matrix.actions(),
            source: InstanceSource::Fixed(instance.matrix.clone()),
            ..Self::preset(Preset::Custom)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.rounds < self.actions {
            return bad(format!(
                "horizon T={} must be at least k={}",
                self.rounds, self.actions
            ));
        }
        if self.instances == 0 {
            return bad("instance count must be at least 1".into());
        }
        if self.thin == 0 {
            return bad("thinning factor must be at least 1".into());
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms selected".into());
        }
        if self.actions == 0 || self.stages.is_empty() || self.stages.contains(&0) {
            return bad("stage and action counts must be positive".into());
        }
        for alg in &self.algorithms {
            if let Algorithm::Scb { types } | Algorithm::Scfgb { types } = alg {
                if let Some(&m) = self.stages.iter().find(|&&m| m < *types) {
                    return bad(format!("{alg} needs at least {types} stages, got {m}"));
                }
            }
        }
        if let Some(j) = self.types.type_count() {
            if j > self.actions || self.stages.iter().any(|&m| m < j) {
                return bad(format!("{j} stage types do not fit the instance size"));
            }
        }
        let binary = match &self.source {
            InstanceSource::Deterministic(_) => true,
            InstanceSource::Beta(_) => false,
            InstanceSource::Fixed(matrix) => matrix.is_deterministic(),
        };
        if !binary && self.algorithms.contains(&Algorithm::Utf) {
            return bad("UTF needs binary (deterministic) instances".into());
        }
        match &self.source {
            InstanceSource::Deterministic(ps) => {
                if ps.is_empty() {
                    return bad("no density values given".into());
                }
                if let Some(p) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                    return Err(Error::ProbabilityOutOfRange(*p));
                }
            }
            InstanceSource::Beta(_) => {}
            InstanceSource::Fixed(matrix) => {
                if self.stages != [matrix.stages()] || self.actions != matrix.actions() {
                    return bad("fixed instance does not match the configured size".into());
                }
            }
        }
        Ok(())
    }

    /// The cells this configuration expands into, in run order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        let densities: Vec<Option<f64>> = match &self.source {
            InstanceSource::Deterministic(ps) => ps.iter().copied().map(Some).collect(),
            _ => vec![None],
        };
        for &m in &self.stages {
            for &p in &densities {
                let mut name = self.preset.name().to_string();
                if self.stages.len() > 1 {
                    name.push_str(&format!("-m{m}"));
                }
                if let (Some(p), true) = (p, densities.len() > 1) {
                    name.push_str(&format!("-p{p}"));
                }
                cells.push(Cell {
                    name,
                    stages: m,
                    density: p,
                });
            }
        }
        cells
    }

    fn generate(&self, cell: &Cell, instance_id: usize) -> Result<ProbabilityMatrix> {
        let id = instance_id.to_string();
        let mut rng = SeededRng::derive(self.seed, &[&cell.name, &id, "instance"]);
        let matrix = match &self.source {
            InstanceSource::Deterministic(_) => gen_deterministic(
                cell.stages,
                self.actions,
                cell.density.expect("deterministic cells carry a density"),
                &mut rng,
            )?,
            InstanceSource::Beta(params) => gen_beta(cell.stages, self.actions, *params, &mut rng)?,
            InstanceSource::Fixed(matrix) => matrix.clone(),
        };
        Ok(match self.types.type_count() {
            Some(j) => relabel_for_stage_types(&matrix, j)?.0,
            None => matrix,
        })
    }
}

/// One (instance family, stage count) combination within an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub name: String,
    pub stages: usize,
    pub density: Option<f64>,
}

/// Traces of every (instance, algorithm) run of one cell.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub cell: Cell,
    pub instances: Vec<ProbabilityMatrix>,
    /// Ordered by instance id, then by the configured algorithm order.
    pub traces: Vec<RegretTrace>,
}

impl CellResult {
    pub fn traces_for<'a>(&'a self, algorithm: &'a str) -> impl Iterator<Item = &'a RegretTrace> {
        self.traces.iter().filter(move |t| t.algorithm == algorithm)
    }

    /// Final cumulative regret of `algorithm` per instance, in instance order.
    pub fn final_regrets(&self, algorithm: &str) -> Vec<f64> {
        self.traces_for(algorithm)
            .map(RegretTrace::final_regret)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub cells: Vec<CellResult>,
}

impl ExperimentOutput {
    pub fn cell(&self, name: &str) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.cell.name == name)
    }
}

/// Seed of the environment stream for one run; also written to CSV.
pub fn run_seed(master: u64, cell: &str, instance_id: usize, algorithm: &str) -> u64 {
    derive_seed(master, &[cell, &instance_id.to_string(), algorithm, "env"])
}

/// Runs every cell of the experiment. Work is spread over the rayon pool;
/// results come back in deterministic order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let mut cells = Vec::new();
    for cell in config.cells() {
        let instances = (0..config.instances)
            .map(|id| config.generate(&cell, id))
            .collect::<Result<Vec<_>>>()?;
        let tasks: Vec<(usize, Algorithm)> = (0..config.instances)
            .flat_map(|id| config.algorithms.iter().map(move |&a| (id, a)))
            .collect();
        let traces = tasks
            .par_iter()
            .map(|&(id, alg)| {
                let label = alg.label();
                let matrix = &instances[id];
                let env_seed = run_seed(config.seed, &cell.name, id, &label);
                let planner_rng = SeededRng::derive(
                    config.seed,
                    &[&cell.name, &id.to_string(), &label, "planner"],
                );
                let mut planner = alg.planner(matrix.stages(), matrix.actions(), planner_rng)?;
                let mut env_rng = SeededRng::new(env_seed);
                let cumulative = run_planner(matrix, &mut planner, &mut env_rng, config.rounds)?;
                Ok(RegretTrace {
                    algorithm: label,
                    instance_id: id,
                    seed: env_seed,
                    cumulative,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        cells.push(CellResult {
            cell,
            instances,
            traces,
        });
    }
    Ok(ExperimentOutput {
        config: config.clone(),
        cells,
    })
}
