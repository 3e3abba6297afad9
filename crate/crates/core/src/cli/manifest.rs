use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const RUN_MANIFEST_SCHEMA: &str = "spinlat.run-manifest.v1";
pub const MANIFEST_FILE: &str = "run_manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    fn of(path: &Path, bytes: &[u8]) -> Self {
        FileDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// Record written next to the outputs of every command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub command: String,
    pub params: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub version: String,
    pub wall_time_s: f64,
    pub exit_code: i32,
}

/// Collects input and output digests while a command runs.
pub struct Recorder {
    command: String,
    params: serde_json::Value,
    out_dir: PathBuf,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    start: Instant,
}

impl Recorder {
    pub fn new(command: &str, params: serde_json::Value, out_dir: &Path) -> Result<Self> {
        fs::create_dir_all(out_dir)?;
        Ok(Recorder {
            command: command.into(),
            params,
            out_dir: out_dir.to_path_buf(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            start: Instant::now(),
        })
    }

    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path)?;
        self.inputs.push(FileDigest::of(path, &bytes));
        Ok(String::from_utf8_lossy(&bytes).into_owned())
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.out_dir.join(name);
        fs::write(&path, bytes)?;
        self.outputs.push(FileDigest::of(&path, bytes));
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// Writes the manifest; output digests exclude the manifest itself.
    pub fn finish(self, exit_code: i32) -> Result<RunManifest> {
        let manifest = RunManifest {
            schema: RUN_MANIFEST_SCHEMA.into(),
            command: self.command,
            params: self.params,
            inputs: self.inputs,
            outputs: self.outputs,
            version: env!("CARGO_PKG_VERSION").into(),
            wall_time_s: self.start.elapsed().as_secs_f64(),
            exit_code,
        };
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(self.out_dir.join(MANIFEST_FILE), text)?;
        Ok(manifest)
    }
}
