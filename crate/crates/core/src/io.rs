//! JSON documents for code sets.
//!
//! ```json
//! {
//!   "ambient": {"kind": "torus", "moduli": [6, 6, 3]},
//!   "vertices": [[0, 0, 0], [0, 1, 0]],
//!   "kappa": {"0,0,0;0,1,0": 1},
//!   "kappa_uniform": 1
//! }
//! ```
//! `kappa` maps translation-class keys to radii; `kappa_uniform` covers every other class.
//! Template-built codes also carry a `template` block.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::TemplateSpec;
use crate::lattice::{ClassKey, CodeError, CodeSet, KappaAssignment};
use crate::metric::{Ambient, Point};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed code file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeFile {
    pub ambient: Ambient,
    pub vertices: Vec<Point>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub kappa: BTreeMap<ClassKey, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_uniform: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<TemplateSpec>,
}

impl CodeFile {
    pub fn new(code: &CodeSet, kappa: &KappaAssignment) -> Self {
        CodeFile {
            ambient: code.ambient.clone(),
            vertices: code.vertices.to_vec(),
            kappa: kappa.by_class.clone(),
            kappa_uniform: kappa.uniform,
            template: None,
        }
    }

    pub fn with_template(mut self, t: TemplateSpec) -> Self {
        self.template = Some(t);
        self
    }

    pub fn code(&self) -> Result<CodeSet, CodeError> {
        CodeSet::new(self.ambient.clone(), self.vertices.iter().cloned())
    }

    pub fn kappa(&self) -> KappaAssignment {
        KappaAssignment {
            by_class: self.kappa.clone(),
            uniform: self.kappa_uniform,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, IoError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| IoError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), IoError> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|source| IoError::Write {
            path: path.display().to_string(),
            source,
        })
    }
}
