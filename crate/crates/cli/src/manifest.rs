//! Run manifests: a line-oriented `key = value` record of what a command
//! did and which files it produced, with checksums. Written atomically at
//! the end of the run.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use onn_core::{Error, Result};

pub struct Manifest {
    command: String,
    config: Vec<(String, String)>,
    files: Vec<PathBuf>,
    started_unix: u64,
}

fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl Manifest {
    pub fn start(command: &str) -> Manifest {
        Manifest {
            command: command.to_string(),
            config: Vec::new(),
            files: Vec::new(),
            started_unix: now_unix(),
        }
    }

    pub fn config(&mut self, key: &str, value: impl std::fmt::Display) {
        self.config.push((key.to_string(), value.to_string()));
    }

    pub fn file(&mut self, path: &Path) {
        self.files.push(path.to_path_buf());
    }

    /// Writes `manifest.txt` into `dir` (atomic rename from a temp file).
    pub fn write(self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
        let mut out = String::new();
        out.push_str(&format!("tool = onn {}\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("command = {}\n", self.command));
        for (k, v) in &self.config {
            out.push_str(&format!("config.{k} = {v}\n"));
        }
        out.push_str(&format!("started_unix = {}\n", self.started_unix));
        out.push_str(&format!("ended_unix = {}\n", now_unix()));
        for path in &self.files {
            let bytes =
                std::fs::read(path).map_err(|e| Error::io(path.display().to_string(), e))?;
            let digest = Sha256::digest(&bytes);
            let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            out.push_str(&format!("file = {name} sha256={hex} bytes={}\n", bytes.len()));
        }

        let final_path = dir.join("manifest.txt");
        let tmp_path = dir.join("manifest.txt.tmp");
        std::fs::write(&tmp_path, out).map_err(|e| Error::io(tmp_path.display().to_string(), e))?;
        std::fs::rename(&tmp_path, &final_path)
            .map_err(|e| Error::io(final_path.display().to_string(), e))?;
        Ok(final_path)
    }
}
