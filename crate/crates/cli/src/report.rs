//! Run reports: every command emits one, as human-readable text or as a
//! JSON document with hashed inputs.

use std::fs;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

use nilscope_core::{Error, Result};

/// One input file, identified by the path as given and the digest of its
/// bytes.
#[derive(Serialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

/// The envelope around every command's payload. The payload is deterministic
/// for fixed inputs; only `elapsed_ms` varies run to run.
#[derive(Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputHash>,
    pub exact_arithmetic: bool,
    pub elapsed_ms: u128,
    pub payload: serde_json::Value,
}

impl RunReport {
    pub fn new(
        command: &str,
        inputs: Vec<InputHash>,
        elapsed: Duration,
        payload: serde_json::Value,
    ) -> Self {
        RunReport {
            command: command.to_string(),
            inputs,
            exact_arithmetic: true,
            elapsed_ms: elapsed.as_millis(),
            payload,
        }
    }
}

/// Reads a file and records its digest, with a readable error on failure.
pub fn read_input(path: &Path, hashes: &mut Vec<InputHash>) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| {
        Error::domain(format!("cannot read {}: {e}", path.display()))
    })?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hashes.push(InputHash {
        path: path.display().to_string(),
        sha256: hex,
    });
    String::from_utf8(bytes).map_err(|_| {
        Error::domain(format!("{} is not UTF-8 text", path.display()))
    })
}
