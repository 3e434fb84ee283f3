use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Record of one run: enough to repeat it with `replay`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Map<String, serde_json::Value>,
    /// Seed of the random generator; `null` for deterministic commands.
    pub seed: Option<u64>,
    pub outputs: Vec<PathBuf>,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new<P: Serialize>(command: &str, parameters: &P, seed: Option<u64>, outputs: Vec<PathBuf>) -> CliResult<Self> {
        let parameters = match serde_json::to_value(parameters) {
            Ok(serde_json::Value::Object(map)) => map,
            Ok(_) => serde_json::Map::new(),
            Err(e) => return Err(CliError::Data(e.to_string())),
        };
        Ok(Self {
            command: command.to_string(),
            parameters,
            seed,
            outputs,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        })
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::Data(e.to_string()))?;
        std::fs::write(path, text + "\n").map_err(CliError::io(path))
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn parameters_as<T: for<'de> Deserialize<'de>>(&self) -> CliResult<T> {
        serde_json::from_value(serde_json::Value::Object(self.parameters.clone()))
            .map_err(|e| CliError::Usage(format!("manifest parameters for {}: {e}", self.command)))
    }
}

/// `out.csv` → `out.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    output.with_extension("manifest.json")
}
