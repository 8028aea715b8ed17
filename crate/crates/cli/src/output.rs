//! Atomic file output and the JSON manifest sidecar.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Writes through a temporary file in the destination directory and renames
/// it into place, so readers never see a partial file.
pub fn write_atomic<F>(path: &Path, fill: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create temporary file in {}", dir.display()))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        fill(&mut w)?;
        w.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("cannot move output into place at {}", path.display()))?;
    Ok(())
}

/// Writes to `path` atomically, or to stdout when no path is given.
pub fn write_output<F>(path: Option<&Path>, fill: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(p) => write_atomic(p, fill),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            fill(&mut lock)?;
            lock.flush()?;
            Ok(())
        }
    }
}

#[derive(Debug, Serialize)]
pub struct InputRecord {
    pub path: PathBuf,
    pub sha256: String,
}

/// Reads a file and returns its bytes together with their digest record.
pub fn read_hashed(path: &Path) -> Result<(Vec<u8>, InputRecord)> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let record = InputRecord {
        path: path.to_path_buf(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    };
    Ok((bytes, record))
}

/// Everything needed to reproduce one command's outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub params: Value,
    pub inputs: Vec<InputRecord>,
    pub outputs: Vec<PathBuf>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub summary: Value,
}

impl RunManifest {
    pub fn new(command: &str, params: impl Serialize) -> Result<Self> {
        Ok(Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            params: serde_json::to_value(params)?,
            inputs: Vec::new(),
            outputs: Vec::new(),
            summary: Value::Null,
        })
    }

    pub fn sidecar_path(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    /// Writes `<output>.manifest.json` next to the primary output. Nothing is
    /// written when output went to stdout.
    pub fn write_beside(&self, output: Option<&Path>) -> Result<()> {
        let Some(output) = output else { return Ok(()) };
        write_atomic(&Self::sidecar_path(output), |w| {
            serde_json::to_writer_pretty(&mut *w, self)?;
            writeln!(w)?;
            Ok(())
        })
    }
}
