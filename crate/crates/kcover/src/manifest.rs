//! Run manifests: enough to re-run a command and get the same output bytes.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cli::Command;
use crate::error::{Error, Result};
use crate::format::{read_text, write_text};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// The fully resolved command, defaults included, input paths absolute.
    pub command: Command,
    pub seed: Option<u64>,
    pub inputs: Vec<PathBuf>,
    pub out_dir: PathBuf,
    /// File names inside `out_dir`, in the order they were written.
    pub outputs: Vec<String>,
    pub wall_time_ms: f64,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        serde_json::from_str(&read_text(path)?).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: e.line(),
            message: e.to_string(),
        })
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        write_text(&dir.join(MANIFEST_FILE), &json)
    }
}
