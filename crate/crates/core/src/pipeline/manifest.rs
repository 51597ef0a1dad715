//! The run manifest: which stages ran, what they produced, and the config
//! digest they ran under. Reruns against a different config in the same
//! output directory are refused instead of silently mixing artifacts.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub outputs: Vec<String>,
    pub duration_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub engine_version: String,
    pub config_digest: String,
    pub stages: BTreeMap<String, StageRecord>,
}

impl RunManifest {
    pub fn new(config_digest: String) -> Self {
        RunManifest {
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            config_digest,
            stages: BTreeMap::new(),
        }
    }

    pub fn path(out_dir: &Path) -> std::path::PathBuf {
        out_dir.join("manifest.json")
    }

    /// Loads the manifest in `out_dir`, or starts a fresh one. An existing
    /// manifest with a different config digest is an error.
    pub fn load_or_new(out_dir: &Path, config_digest: &str) -> Result<RunManifest> {
        let path = Self::path(out_dir);
        if !path.exists() {
            return Ok(RunManifest::new(config_digest.to_string()));
        }
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let manifest: RunManifest = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("corrupt manifest {}: {e}", path.display())))?;
        if manifest.config_digest != config_digest {
            return Err(Error::Config(format!(
                "output directory {} was produced by a different config (digest {} vs {}); \
                 use a fresh directory or the original config",
                out_dir.display(),
                manifest.config_digest,
                config_digest
            )));
        }
        Ok(manifest)
    }

    pub fn record(&mut self, stage: &str, outputs: Vec<String>, duration_ms: u64) {
        self.stages.insert(
            stage.to_string(),
            StageRecord {
                outputs,
                duration_ms,
            },
        );
    }

    pub fn has_stage(&self, stage: &str) -> bool {
        self.stages.contains_key(stage)
    }

    pub fn require_stage(&self, stage: &str, needed_by: &str) -> Result<()> {
        if self.has_stage(stage) {
            Ok(())
        } else {
            Err(Error::Prerequisite(format!(
                "stage {needed_by} needs the outputs of stage {stage}; run it first"
            )))
        }
    }

    pub fn save(&self, out_dir: &Path) -> Result<()> {
        let path = Self::path(out_dir);
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))
    }
}
