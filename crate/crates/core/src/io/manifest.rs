//! `manifest.json`: what was run and digests of what it wrote.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::rng::Substream;

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstreamLabel {
    pub label: String,
    pub stream: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDigest {
    /// Relative to the output directory.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub parameters: serde_json::Value,
    pub root_seed: u64,
    pub rng: String,
    pub substreams: Vec<SubstreamLabel>,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub outputs: Vec<OutputDigest>,
}

pub fn unix_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn digest_file(dir: &Path, relative: &str) -> Result<OutputDigest> {
    let bytes = std::fs::read(dir.join(relative))?;
    Ok(OutputDigest {
        path: relative.to_string(),
        bytes: bytes.len() as u64,
        sha256: sha256_hex(&bytes),
    })
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value, root_seed: u64, started_unix_ms: u128) -> Self {
        Self {
            tool: "nolb".into(),
            version: crate::VERSION.into(),
            command: command.into(),
            parameters,
            root_seed,
            rng: "ChaCha8 (rand_chacha), seed_from_u64 + set_stream".into(),
            substreams: Substream::ALL
                .iter()
                .map(|s| SubstreamLabel {
                    label: s.label().into(),
                    stream: s.id(),
                })
                .collect(),
            started_unix_ms,
            finished_unix_ms: started_unix_ms,
            outputs: Vec::new(),
        }
    }

    /// Digests `files` (relative to `dir`), stamps the finish time and writes
    /// the manifest next to them.
    pub fn finish(mut self, dir: &Path, files: &[String]) -> Result<Self> {
        self.outputs = files.iter().map(|f| digest_file(dir, f)).collect::<Result<_>>()?;
        self.finished_unix_ms = unix_ms();
        std::fs::write(dir.join(MANIFEST_NAME), serde_json::to_string_pretty(&self)? + "\n")?;
        Ok(self)
    }
}

/// Outputs listed in `dir/manifest.json` that are missing or differ from
/// their recorded digest.
pub fn verify_manifest(dir: &Path) -> Result<Vec<String>> {
    let manifest: RunManifest = serde_json::from_str(&std::fs::read_to_string(dir.join(MANIFEST_NAME))?)?;
    let mut bad = Vec::new();
    for out in &manifest.outputs {
        match digest_file(dir, &out.path) {
            Ok(d) if d == *out => {}
            _ => bad.push(out.path.clone()),
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_known_input() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn manifest_detects_tampering() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("a.csv"), "x\n1\n").unwrap();
        let m = RunManifest::new("simulate", serde_json::json!({"n": 1}), 7, unix_ms())
            .finish(dir.path(), &["a.csv".to_string()])
            .unwrap();
        assert_eq!(m.outputs[0].bytes, 4);
        assert!(verify_manifest(dir.path()).unwrap().is_empty());
        std::fs::write(dir.path().join("a.csv"), "x\n2\n").unwrap();
        assert_eq!(verify_manifest(dir.path()).unwrap(), vec!["a.csv".to_string()]);
    }
}
