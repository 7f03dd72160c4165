//! Run manifests: what ran, how it ended and a checksum of every file.

use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskStatus {
    Ok,
    /// The task ran but one of its asserted checks failed.
    CheckFailed,
    Budget,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskRecord {
    pub name: String,
    pub status: TaskStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl TaskRecord {
    pub fn ok(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: TaskStatus::Ok,
            message: None,
        }
    }

    /// Downgrades an `ok` task when `passed` is false.
    pub fn check(&mut self, passed: bool, message: impl FnOnce() -> String) {
        if !passed && self.status == TaskStatus::Ok {
            self.status = TaskStatus::CheckFailed;
            self.message = Some(message());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileEntry {
    /// Relative to the output directory, or as given for inputs.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

impl FileEntry {
    pub fn new(path: impl Into<String>, bytes: &[u8]) -> Self {
        Self {
            path: path.into(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len() as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentEntry {
    pub experiment: String,
    pub stem: String,
    pub seed: u64,
    pub tasks: Vec<TaskRecord>,
    pub inputs: Vec<FileEntry>,
    pub outputs: Vec<FileEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Versions {
    pub mdim: String,
    pub mdim_core: String,
}

impl Default for Versions {
    fn default() -> Self {
        Self {
            mdim: env!("CARGO_PKG_VERSION").to_string(),
            mdim_core: mdim_core::VERSION.to_string(),
        }
    }
}

/// Everything except `wall_clock_seconds` is a function of the effective
/// config and the code version, so two runs compare byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    /// SHA-256 of the effective config as canonical JSON.
    pub config_sha256: String,
    /// The `--seed` override, when given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub versions: Versions,
    pub bits: bool,
    pub experiments: Vec<ExperimentEntry>,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}
