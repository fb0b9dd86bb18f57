//! Versioned on-disk form of the reduced model.
//!
//! JSON with full-precision floats: serialization uses the shortest
//! round-trip decimal representation, so save/load reproduces every matrix
//! entry bit-exactly.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::mor::{MorError, ReducedModel};

pub const ARTIFACT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RomArtifact {
    pub version: u32,
    /// Captured POD energy of the training snapshots.
    pub pod_energy_ratio: f64,
    pub pod_singular_values: Vec<f64>,
    /// Calibrated worst-case relative volume-output error of the reduction
    /// on step responses over the training range.
    pub eps_mor: f64,
    pub model: ReducedModel,
}

impl RomArtifact {
    pub fn rate_hz(&self) -> f64 {
        1.0 / self.model.dt
    }

    pub fn save(&self, path: &Path) -> Result<(), MorError> {
        let text = serde_json::to_string(self)
            .map_err(|e| MorError::Serialization(e.to_string()))?;
        fs::write(path, text).map_err(|e| MorError::Io(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, MorError> {
        let text =
            fs::read_to_string(path).map_err(|e| MorError::Io(format!("{}: {e}", path.display())))?;
        let artifact: RomArtifact =
            serde_json::from_str(&text).map_err(|e| MorError::Serialization(e.to_string()))?;
        if artifact.version != ARTIFACT_VERSION {
            return Err(MorError::Serialization(format!(
                "artifact version {} unsupported (expected {ARTIFACT_VERSION})",
                artifact.version
            )));
        }
        Ok(artifact)
    }
}
