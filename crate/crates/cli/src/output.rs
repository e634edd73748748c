use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{CliError, ExperimentConfig};

/// Files written by a run, in write order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Written {
    pub files: Vec<PathBuf>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub(crate) struct OutputDir {
    dir: PathBuf,
    files: Vec<(String, String)>,
    written: Written,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
            written: Written::default(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(io_err(&path))?;
        self.files.push((name.to_string(), sha256_hex(bytes)));
        self.written.files.push(path);
        Ok(())
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn write_json(&mut self, name: &str, value: &Value) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("JSON value serializes");
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// Writes `manifest.json` and returns the list of files.
    pub fn finish(mut self, command: &str, cfg: &ExperimentConfig, verdict: &str) -> Result<Written, CliError> {
        let outputs: serde_json::Map<String, Value> = self
            .files
            .iter()
            .map(|(n, h)| (n.clone(), Value::String(h.clone())))
            .collect();
        let manifest = json!({
            "command": command,
            "config_sha256": sha256_hex(cfg.canonical_json().as_bytes()),
            "seed": cfg.run.seed,
            "threads": cfg.run.threads,
            "summation": wwlab::averages::SUMMATION_MODE,
            "version": env!("CARGO_PKG_VERSION"),
            "outputs": outputs,
            "verdict": verdict,
        });
        self.write_json("manifest.json", &manifest)?;
        Ok(self.written)
    }
}
