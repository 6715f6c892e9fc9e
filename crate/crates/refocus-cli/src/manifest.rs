// Copyright 2026 The refocus developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Run manifests: every command writes one next to its outputs, recording the
//! full parameter set, the seed, the tool version, the wall-clock duration
//! and a git-style content hash of each output file. The data files are
//! byte-reproducible under a fixed seed; the manifest's wall-clock field is
//! the one value that varies between runs.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha1::{Digest, Sha1};

#[derive(Debug, Serialize)]
pub struct OutputEntry {
    pub file: String,
    /// SHA-1 of the git blob encoding (`blob {len}\0` + bytes).
    pub sha1: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<OutputEntry>,
}

/// Hash of a file's contents using the git blob convention.
pub fn git_blob_sha1(bytes: &[u8]) -> String {
    let mut hasher = Sha1::new();
    hasher.update(format!("blob {}\0", bytes.len()).as_bytes());
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Collects hashes for the named output files and writes `manifest.json`
/// into `out_dir`. Returns the manifest path.
pub fn write_manifest(
    out_dir: &Path,
    command: &str,
    parameters: serde_json::Value,
    seed: Option<u64>,
    started: Instant,
    outputs: &[PathBuf],
) -> Result<PathBuf> {
    let mut entries = Vec::with_capacity(outputs.len());
    for path in outputs {
        let bytes = std::fs::read(path)
            .with_context(|| format!("reading output {} for hashing", path.display()))?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        entries.push(OutputEntry {
            file: name,
            sha1: git_blob_sha1(&bytes),
        });
    }
    let manifest = RunManifest {
        command: command.to_string(),
        parameters,
        seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        outputs: entries,
    };
    let path = out_dir.join("manifest.json");
    let body = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(&path, body + "\n")
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}
