use std::path::PathBuf;

/// Errors produced anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("probability {value} at ({row}, {col}) is outside [0, 1]")]
    InvalidProbability { row: usize, col: usize, value: f64 },

    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("matrix must have at least one stage and one action (got {m}x{k})")]
    EmptyMatrix { m: usize, k: usize },

    #[error("row {row} has {len} entries, expected {k}")]
    RaggedRow { row: usize, len: usize, k: usize },

    #[error("matrix is flagged deterministic but entry ({row}, {col}) = {value} is not 0 or 1")]
    NotBinary { row: usize, col: usize, value: f64 },

    #[error("action sequence has length {got}, matrix has {expected} stages")]
    LengthMismatch { expected: usize, got: usize },

    #[error("action {action} at stage {stage} is out of range for {k} actions")]
    ActionOutOfRange {
        stage: usize,
        action: usize,
        k: usize,
    },

    #[error("invalid stage type map: {0}")]
    InvalidTypeMap(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("environment contradicted earlier observation at stage {stage}, action {action}")]
    CorruptedEnvironment { stage: usize, action: usize },

    #[error("unknown preset `{name}` (valid: {valid})")]
    UnknownPreset { name: String, valid: String },

    #[error("unknown algorithm `{name}` (valid: {valid})")]
    UnknownAlgorithm { name: String, valid: String },

    #[error("CSV schema error at row {row}: {msg}")]
    CsvSchema { row: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
