//! Artifact writing: CSV and JSON files in the output directory, each
//! recorded with its SHA-256 in `manifest.json`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
struct ManifestEntry {
    file: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command_line: &'a [String],
    seed: u64,
    versions: Versions,
    outputs: &'a [ManifestEntry],
}

#[derive(Debug, Serialize)]
struct Versions {
    oneperc: &'static str,
}

pub struct Artifacts {
    dir: PathBuf,
    written: Vec<ManifestEntry>,
}

impl Artifacts {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Artifacts {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(ManifestEntry {
            file: name.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
        Ok(())
    }

    /// Writes a CSV with a header row; every record must match its width.
    pub fn csv<R: AsRef<[String]>>(&mut self, name: &str, header: &[&str], rows: &[R]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            w.write_record(row.as_ref())?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("flushing {name}: {e}"))?;
        self.write_bytes(name, &bytes)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.write_bytes(name, &bytes)
    }

    pub fn finish(self, command_line: &[String], seed: u64) -> Result<()> {
        let manifest = Manifest {
            command_line,
            seed,
            versions: Versions {
                oneperc: env!("CARGO_PKG_VERSION"),
            },
            outputs: &self.written,
        };
        let mut bytes = serde_json::to_vec_pretty(&manifest)?;
        bytes.push(b'\n');
        let path = self.dir.join("manifest.json");
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))
    }
}
