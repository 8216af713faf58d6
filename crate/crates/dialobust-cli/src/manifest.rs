//! Run manifests: the reproducibility record written next to file outputs.

use std::collections::BTreeMap;
use std::fs;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Reproducibility record for one invocation, written as pretty JSON to
/// `<output>.manifest.json` whenever the output goes to a file.
///
/// Re-running the recorded `command` with the same seed, config, and inputs
/// reproduces the recorded `output_sha256` exactly. `command` therefore lists
/// only the content-determining arguments: `--output` (where the bytes land)
/// and `--jobs` (how many threads produce them) are omitted, since neither
/// changes a single output byte.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub toolkit_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_sha256: Option<String>,
    pub input_sha256: BTreeMap<String, String>,
    pub output_sha256: String,
    pub wall_time_ms: u64,
}

impl RunManifest {
    /// Write the manifest next to `output_path`.
    pub fn write_next_to(&self, output_path: &str) -> Result<(), CliError> {
        let path = format!("{output_path}.manifest.json");
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        fs::write(&path, text).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

/// Lowercase hex SHA-256 digest of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// SHA-256 digest of a config's canonical JSON form (compact, fields in
/// declaration order, maps sorted by key).
pub fn config_digest<T: Serialize>(config: &T) -> String {
    sha256_hex(
        serde_json::to_string(config)
            .expect("config serializes")
            .as_bytes(),
    )
}

/// The invocation arguments with execution-only details removed: `--output`
/// and `--jobs` never affect output bytes, so two runs that differ only in
/// them carry the same command in their manifests.
pub fn content_command() -> Vec<String> {
    filter_command(std::env::args().skip(1))
}

fn filter_command(args: impl Iterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    let mut args = args.peekable();
    while let Some(arg) = args.next() {
        if arg == "--output" || arg == "--jobs" {
            let _ = args.next();
            continue;
        }
        if arg.starts_with("--output=") || arg.starts_with("--jobs=") {
            continue;
        }
        out.push(arg);
    }
    out
}
