//! Report envelope and config hashing.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const TOOL: &str = "pcn-resilience";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(2 * bytes.len());
    for b in bytes {
        let _ = write!(s, "{b:02x}");
    }
    s
}

pub fn file_digest(path: &Path) -> anyhow::Result<String> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(hex(&Sha256::digest(&bytes)))
}

/// Run identity: everything that determines the output, with input files
/// represented by their content digest rather than their path.
pub struct RunInfo {
    pub command: &'static str,
    pub seed: u64,
    pub config: Value,
}

impl RunInfo {
    pub fn new(command: &'static str, seed: u64, config: Value) -> Self {
        RunInfo { command, seed, config }
    }

    pub fn config_hash(&self) -> String {
        let canonical = json!({"command": self.command, "seed": self.seed, "config": self.config, "version": VERSION});
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        hex(&digest[..8])
    }

    fn header(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("tool".into(), TOOL.into());
        m.insert("version".into(), VERSION.into());
        m.insert("command".into(), self.command.into());
        m.insert("seed".into(), self.seed.into());
        m.insert("config_hash".into(), self.config_hash().into());
        m.insert("config".into(), self.config.clone());
        m
    }

    /// JSON document: run header followed by the payload's fields.
    pub fn json<T: Serialize>(&self, payload: &T) -> anyhow::Result<String> {
        let mut doc = self.header();
        match serde_json::to_value(payload)? {
            Value::Object(fields) => doc.extend(fields),
            other => {
                doc.insert("result".into(), other);
            }
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(doc))?;
        text.push('\n');
        Ok(text)
    }

    /// CSV text with `#` comment lines carrying the run header.
    pub fn csv(&self, header: &str, rows: &[String]) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# tool={TOOL} version={VERSION} command={}", self.command);
        let _ = writeln!(out, "# seed={} config_hash={}", self.seed, self.config_hash());
        out.push_str(header);
        out.push('\n');
        for row in rows {
            out.push_str(row);
            out.push('\n');
        }
        out
    }
}

pub fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}
