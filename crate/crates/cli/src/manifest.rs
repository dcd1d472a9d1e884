//! Output bookkeeping and the run manifest written next to every result.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputFile {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Collects files written into the output directory.
pub struct Outputs {
    dir: PathBuf,
    files: Vec<OutputFile>,
}

impl Outputs {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(OutputFile {
            file: name.to_string(),
            bytes: bytes.len(),
            sha256: hex_digest(bytes),
        });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_vec_pretty(value)?;
        text.push(b'\n');
        self.write(name, &text)
    }

    pub fn files(&self) -> &[OutputFile] {
        &self.files
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub command: &'a str,
    pub version: &'a str,
    pub format: &'a str,
    pub seed: u64,
    /// Per-component seeds derived from the master seed.
    pub derived_seeds: &'a [(String, u64)],
    pub params: &'a serde_json::Value,
    /// SHA-256 over command, format, seed and parameters; equal hashes mean
    /// byte-identical outputs.
    pub input_hash: String,
    pub threads: usize,
    pub outputs: &'a [OutputFile],
    pub duration_seconds: f64,
}

pub fn input_hash(command: &str, format: &str, seed: u64, params: &serde_json::Value) -> String {
    let canonical = serde_json::json!({
        "command": command,
        "format": format,
        "seed": seed,
        "params": params,
    });
    hex_digest(canonical.to_string().as_bytes())
}

pub struct ManifestInput<'a> {
    pub command: &'a str,
    pub format: &'a str,
    pub seed: u64,
    pub derived_seeds: &'a [(String, u64)],
    pub params: &'a serde_json::Value,
    pub threads: usize,
    pub elapsed: Duration,
}

pub fn write_manifest(out: &Outputs, m: ManifestInput<'_>) -> Result<PathBuf> {
    let manifest = RunManifest {
        command: m.command,
        version: env!("CARGO_PKG_VERSION"),
        format: m.format,
        seed: m.seed,
        derived_seeds: m.derived_seeds,
        params: m.params,
        input_hash: input_hash(m.command, m.format, m.seed, m.params),
        threads: m.threads,
        outputs: out.files(),
        duration_seconds: m.elapsed.as_secs_f64(),
    };
    let path = out.dir().join("manifest.json");
    let mut text = serde_json::to_vec_pretty(&manifest)?;
    text.push(b'\n');
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}
