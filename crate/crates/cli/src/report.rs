use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Infeasible,
    Timeout,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail | Status::Infeasible => 1,
            Status::Timeout => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub elapsed_ms: u128,
    /// Search effort; may differ between parallel runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
}

/// One JSON document per invocation. Field order is fixed by declaration order.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub status: Status,
    pub counts: BTreeMap<String, u64>,
    pub details: Value,
    pub artifacts: Vec<PathBuf>,
    pub timings: Timings,
}

/// Hashes the argument vector and the bytes of every input file read.
#[derive(Default)]
pub struct Digest256(Sha256);

impl Digest256 {
    pub fn args(&mut self, args: &[String]) {
        for a in args {
            self.0.update(a.as_bytes());
            self.0.update([0]);
        }
    }

    pub fn read(&mut self, path: &Path) -> anyhow::Result<String> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.0.update(text.as_bytes());
        Ok(text)
    }

    pub fn hex(self) -> String {
        self.0
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
