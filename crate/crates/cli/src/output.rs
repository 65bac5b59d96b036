use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use mls_core::census::write_counts_csv;
use serde::Serialize;

use crate::CliError;

/// Report files keyed by name, plus the one-line stdout summary.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Outputs {
    pub files: BTreeMap<String, Vec<u8>>,
    pub summary: String,
}

impl Outputs {
    pub fn json<S: Serialize>(&mut self, name: &str, value: &S) -> Result<(), CliError> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
        bytes.push(b'\n');
        self.files.insert(name.to_string(), bytes);
        Ok(())
    }

    pub fn counts(&mut self, name: &str, counts: &[(f64, f64)]) -> Result<(), CliError> {
        let mut buf = Vec::new();
        write_counts_csv(&mut buf, counts)?;
        self.files.insert(name.to_string(), buf);
        Ok(())
    }

    pub fn raw(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.insert(name.to_string(), bytes);
    }

    pub fn merge(&mut self, prefix: &str, other: Outputs) {
        for (k, v) in other.files {
            self.files.insert(format!("{prefix}{k}"), v);
        }
    }

    pub fn write_to(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir)?;
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            if let Some(p) = path.parent() {
                fs::create_dir_all(p)?;
            }
            fs::write(path, bytes)?;
        }
        Ok(())
    }
}
