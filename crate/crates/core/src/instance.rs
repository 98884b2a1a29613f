//! JSON instance files.
//!
//! ```json
//! {"m": 2, "k": 3, "P": [[0.9, 0.1, 0.5], [0.2, 0.8, 0.3]],
//!  "stage_types": [0, 0], "deterministic": false}
//! ```
//!
//! `stage_types` and `deterministic` are optional. Stage types are 0-based.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ProbabilityMatrix, StageTypeMap};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct InstanceFile {
    m: usize,
    k: usize,
    #[serde(rename = "P")]
    p: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stage_types: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    deterministic: Option<bool>,
}

/// A probability matrix with optional stage-type knowledge.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub matrix: ProbabilityMatrix,
    pub stage_types: Option<StageTypeMap>,
}

impl Instance {
    pub fn new(matrix: ProbabilityMatrix, stage_types: Option<StageTypeMap>) -> Result<Self> {
        if let Some(types) = &stage_types {
            types.check_stages(matrix.stages())?;
        }
        Ok(Self {
            matrix,
            stage_types,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|source| Error::Json {
            path: "<instance>".into(),
            source,
        })?;
        Self::from_file(file)
    }

    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            m: self.matrix.stages(),
            k: self.matrix.actions(),
            p: self.matrix.to_rows(),
            stage_types: self.stage_types.as_ref().map(|t| t.assignments().to_vec()),
            deterministic: Some(self.matrix.is_deterministic()),
        };
        serde_json::to_string_pretty(&file).expect("instance serializes")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let file: InstanceFile = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.into(),
            source,
        })?;
        Self::from_file(file)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut text = self.to_json();
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    fn from_file(file: InstanceFile) -> Result<Self> {
        let matrix = if file.deterministic == Some(true) {
            ProbabilityMatrix::deterministic_from_rows(&file.p)?
        } else {
            ProbabilityMatrix::from_rows(&file.p)?
        };
        if matrix.stages() != file.m || matrix.actions() != file.k {
            return Err(Error::InvalidParameter(format!(
                "declared {}x{} but P is {}x{}",
                file.m,
                file.k,
                matrix.stages(),
                matrix.actions()
            )));
        }
        let stage_types = file.stage_types.map(StageTypeMap::new).transpose()?;
        Self::new(matrix, stage_types)
    }
}
