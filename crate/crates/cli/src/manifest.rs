use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Bumped whenever a summary JSON or CSV column layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path) -> std::io::Result<Self> {
        let data = fs::read(path)?;
        Ok(FileDigest {
            path: path.display().to_string(),
            bytes: data.len() as u64,
            sha256: sha256_hex(&data),
        })
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

/// Provenance record written next to every command's outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command_line: Vec<String>,
    /// Seconds since the Unix epoch, or `SOURCE_DATE_EPOCH` when set.
    pub timestamp: u64,
    pub inputs: Vec<FileDigest>,
    pub seeds: Vec<u64>,
    pub outputs: Vec<FileDigest>,
    pub warnings: Vec<String>,
}

/// Collects outputs as they are written.
pub struct Run {
    inputs: Vec<FileDigest>,
    seeds: Vec<u64>,
    outputs: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

impl Run {
    pub fn new() -> Self {
        Run {
            inputs: Vec::new(),
            seeds: Vec::new(),
            outputs: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn input(&mut self, path: &Path) -> std::io::Result<()> {
        self.inputs.push(FileDigest::of(path)?);
        Ok(())
    }

    pub fn seed(&mut self, seed: u64) {
        self.seeds.push(seed);
    }

    pub fn warn(&mut self, message: String) {
        eprintln!("warning: {message}");
        self.warnings.push(message);
    }

    /// Creates `path` and hands a buffered writer to `body`.
    pub fn write<F>(&mut self, path: PathBuf, body: F) -> crate::CliResult<()>
    where
        F: FnOnce(&mut std::io::BufWriter<fs::File>) -> crate::CliResult<()>,
    {
        let mut out = std::io::BufWriter::new(fs::File::create(&path)?);
        body(&mut out)?;
        out.flush()?;
        self.outputs.push(path);
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, path: PathBuf, value: &T) -> crate::CliResult<()> {
        self.write(path, |out| {
            serde_json::to_writer_pretty(&mut *out, value)?;
            out.write_all(b"\n")?;
            Ok(())
        })
    }

    pub fn finish(self, manifest_path: &Path) -> crate::CliResult<Vec<String>> {
        let outputs = self
            .outputs
            .iter()
            .map(|p| FileDigest::of(p))
            .collect::<std::io::Result<Vec<_>>>()?;
        let manifest = RunManifest {
            schema_version: SCHEMA_VERSION,
            tool: "paradox-lens",
            version: env!("CARGO_PKG_VERSION"),
            command_line: std::env::args().collect(),
            timestamp: timestamp(),
            inputs: self.inputs,
            seeds: self.seeds,
            outputs,
            warnings: self.warnings,
        };
        let mut out = std::io::BufWriter::new(fs::File::create(manifest_path)?);
        serde_json::to_writer_pretty(&mut out, &manifest)?;
        out.write_all(b"\n")?;
        out.flush()?;
        Ok(manifest.warnings)
    }
}

fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()))
}
