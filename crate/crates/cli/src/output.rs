use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::CliError;

/// Shortest round-trip representation, in exponent form for tiny or huge
/// magnitudes.
fn write_float(text: &mut String, x: f64) {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
        write!(text, "{x}").unwrap();
    } else {
        write!(text, "{x:e}").unwrap();
    }
}

/// Files produced by one run, held in memory until they are all ready.
#[derive(Debug, Default)]
pub struct Artifacts {
    files: Vec<(String, Vec<u8>)>,
    meta: Map<String, Value>,
}

impl Artifacts {
    pub fn names(&self) -> Vec<String> {
        self.files.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, b)| b.as_slice())
    }

    pub(crate) fn push(&mut self, name: String, bytes: Vec<u8>) {
        self.files.push((name, bytes));
    }

    pub(crate) fn push_csv(&mut self, name: String, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) {
        let mut text = header.join(",");
        text.push('\n');
        for row in rows {
            for (i, x) in row.iter().enumerate() {
                if i > 0 {
                    text.push(',');
                }
                write_float(&mut text, *x);
            }
            text.push('\n');
        }
        self.push(name, text.into_bytes());
    }

    pub(crate) fn push_json(&mut self, name: String, value: &Value) {
        let mut bytes = serde_json::to_vec_pretty(value).expect("json values serialize");
        bytes.push(b'\n');
        self.push(name, bytes);
    }

    pub(crate) fn meta(&mut self, key: &str, value: Value) {
        self.meta.insert(key.to_string(), value);
    }

    pub(crate) fn take_meta(&mut self) -> Value {
        Value::Object(std::mem::take(&mut self.meta))
    }

    /// Writes every file to a temporary name first and renames only after all
    /// of them were written, so a failure leaves no partial outputs.
    pub fn write_to(&self, dir: &Path) -> Result<(), CliError> {
        let io = |path: &Path, e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let mut staged = Vec::with_capacity(self.files.len());
        for (name, bytes) in &self.files {
            let mut tmp = tempfile::Builder::new().prefix(".skagree-").tempfile_in(dir).map_err(|e| io(dir, e))?;
            tmp.write_all(bytes).map_err(|e| io(tmp.path(), e))?;
            staged.push((tmp, dir.join(name)));
        }
        let mut done: Vec<PathBuf> = Vec::new();
        for (tmp, dest) in staged {
            if let Err(e) = tmp.persist(&dest) {
                for path in &done {
                    let _ = std::fs::remove_file(path);
                }
                return Err(io(&dest, e.error));
            }
            done.push(dest);
        }
        Ok(())
    }
}
