use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};
use sheetqa::dataset::DatasetConfig;

/// Everything needed to rerun a command and check the outputs match. No
/// clocks or absolute paths, so reruns give identical manifests.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: DatasetConfig,
    pub seed: u64,
    pub corpus_hash: String,
    pub corpus_tunes: usize,
    pub corpus_rejections: usize,
    pub corpus_duplicates: usize,
    pub tool_versions: BTreeMap<String, String>,
    /// File name to sha256.
    pub outputs: BTreeMap<String, String>,
}

pub fn file_sha256(path: &Path) -> io::Result<String> {
    Ok(hex::encode(Sha256::digest(fs::read(path)?)))
}

impl RunManifest {
    pub fn add_output(&mut self, path: &Path) -> io::Result<()> {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        self.outputs.insert(name, file_sha256(path)?);
        Ok(())
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        let json = serde_json::to_string_pretty(self).map_err(io::Error::from)?;
        fs::write(path, json + "\n")
    }
}
