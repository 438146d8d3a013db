//! Run manifests and file hashing.
//!
//! The manifest id hashes only the reproducible part of a run (command line,
//! resolved config, seed, version, input hashes), so repeated runs with the
//! same flags carry the same id. Output paths and wall-clock time are recorded
//! beside it.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn hash_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(sha256_hex(&bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputFile {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub id: String,
    pub command: Vec<String>,
    pub config: Value,
    pub seed: u64,
    pub version: String,
    pub inputs: Vec<InputFile>,
    pub outputs: Vec<OutputFile>,
    pub wall_clock_ms: u128,
}

/// Collects manifest fields while a command runs.
pub struct ManifestBuilder {
    command: Vec<String>,
    config: Value,
    seed: u64,
    inputs: Vec<InputFile>,
    outputs: Vec<PathBuf>,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(command: Vec<String>, config: Value, seed: u64) -> Self {
        Self { command, config, seed, inputs: Vec::new(), outputs: Vec::new(), started: Instant::now() }
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        let sha256 = hash_file(path)?;
        self.inputs.push(InputFile { path: path.display().to_string(), sha256 });
        Ok(())
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    pub fn id(&self) -> String {
        let key = serde_json::json!({
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "version": VERSION,
            "inputs": self.inputs,
        });
        sha256_hex(key.to_string().as_bytes())
    }

    pub fn finish(self) -> Result<RunManifest> {
        let id = self.id();
        let outputs = self
            .outputs
            .iter()
            .map(|p| Ok(OutputFile { path: p.display().to_string(), sha256: hash_file(p)? }))
            .collect::<Result<_>>()?;
        Ok(RunManifest {
            id,
            command: self.command,
            config: self.config,
            seed: self.seed,
            version: VERSION.to_string(),
            inputs: self.inputs,
            outputs,
            wall_clock_ms: self.started.elapsed().as_millis(),
        })
    }
}

/// `<path>.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
