//! Run manifests: every command serializes its resolved parameters next to
//! its outputs so any run can be replayed bit-exactly from the recorded argv.

use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Arguments as invoked; replaying them reproduces the outputs.
    pub argv: Vec<String>,
    pub parameters: serde_json::Value,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub seed: Option<u64>,
    pub wall_time_s: f64,
}

impl RunManifest {
    pub fn new(command: &str, argv: &[String], parameters: serde_json::Value) -> Self {
        Self {
            tool: "csc".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            argv: argv.to_vec(),
            parameters,
            inputs: Vec::new(),
            outputs: Vec::new(),
            seed: None,
            wall_time_s: 0.0,
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut body = serde_json::to_string_pretty(self).expect("manifest serializes");
        body.push('\n');
        std::fs::write(path, body)
    }
}

/// Manifest path for a primary output: `<output>.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}
