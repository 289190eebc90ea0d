//! Record of one command-line run: resolved inputs and produced files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub subcommand: String,
    /// Command-line arguments after the subcommand.
    pub arguments: Vec<String>,
    pub master_seed: u64,
    pub config: RunConfig,
    pub outputs: Vec<String>,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Output files that are missing on disk.
    pub fn missing_outputs(&self) -> Vec<&str> {
        self.outputs
            .iter()
            .filter(|p| !Path::new(p).is_file())
            .map(String::as_str)
            .collect()
    }
}
