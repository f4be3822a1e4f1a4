//! Atomic file output and run records.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `contents` to a temporary file next to `path` and renames it into
/// place, so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path)
        .map_err(|e| e.error)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Primary output goes to `out` when given, otherwise to stdout.
pub fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, contents.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input_digest: Option<String>,
    pub options: BTreeMap<String, String>,
    pub output_digest: String,
    pub output_path: Option<String>,
    pub exit_code: i32,
    pub timestamp_unix: u64,
}

impl RunRecord {
    pub fn new(command: &str, input: Option<&[u8]>, options: BTreeMap<String, String>) -> Self {
        Self {
            tool: "sympent",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            input_digest: input.map(sha256_hex),
            options,
            output_digest: String::new(),
            output_path: None,
            exit_code: 0,
            timestamp_unix: 0,
        }
    }

    pub fn finish(mut self, output: &str, out: Option<&Path>, exit_code: i32) -> Self {
        self.output_digest = sha256_hex(output.as_bytes());
        self.output_path = out.map(|p| p.display().to_string());
        self.exit_code = exit_code;
        self.timestamp_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        write_atomic(path, text.as_bytes())
    }
}

/// Sidecar location for the record of a run that wrote `out`.
pub fn sidecar(out: &Path) -> PathBuf {
    let mut name = out
        .file_name()
        .map(|s| s.to_os_string())
        .unwrap_or_default();
    name.push(".run.json");
    out.with_file_name(name)
}
