//! Run manifests: written into every output directory before any
//! computation starts, with enough resolved state to replay the run.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct DatasetFingerprint {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: Vec<String>,
    pub resolved: serde_json::Value,
    pub datasets: Vec<DatasetFingerprint>,
    pub seeds: Vec<u64>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(
        resolved: serde_json::Value,
        datasets: Vec<DatasetFingerprint>,
        seeds: Vec<u64>,
        outputs: Vec<String>,
    ) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: std::env::args().collect(),
            resolved,
            datasets,
            seeds,
            outputs,
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(self).map_err(CliError::runtime)?;
        text.push('\n');
        std::fs::write(&path, text)
            .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }
}

pub fn fingerprint(path: &Path) -> Result<DatasetFingerprint, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::runtime(format!("cannot read {}: {e}", path.display())))?;
    let digest = Sha256::digest(&bytes);
    Ok(DatasetFingerprint {
        path: path.display().to_string(),
        sha256: hex::encode(digest),
    })
}
