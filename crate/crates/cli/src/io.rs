//! Staged output directories, 17-digit CSV and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Formats a real with 17 significant digits.
pub fn real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn csv<S: AsRef<str>>(header: &[S], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = header.iter().map(|h| h.as_ref()).collect::<Vec<_>>().join(",");
    s.push('\n');
    for row in rows {
        s.push_str(&row.iter().map(|&v| real(v)).collect::<Vec<_>>().join(","));
        s.push('\n');
    }
    s
}

/// Parses a numeric CSV with a header line.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| CliError::Parse { path: path.into(), line: 1, message: "empty file".into() })?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split(',').map(|s| s.trim().parse::<f64>()).collect();
        let row = row.map_err(|e| CliError::Parse { path: path.into(), line: n + 2, message: e.to_string() })?;
        if row.len() != header.len() {
            return Err(CliError::Parse {
                path: path.into(),
                line: n + 2,
                message: format!("{} fields, header has {}", row.len(), header.len()),
            });
        }
        rows.push(row);
    }
    Ok((header, rows))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Files are collected in a hidden sibling directory and moved into place
/// only on [`Staging::commit`]; dropping an uncommitted staging area removes it.
#[derive(Debug)]
pub struct Staging {
    target: PathBuf,
    tmp: PathBuf,
    files: Vec<FileEntry>,
    committed: bool,
}

impl Staging {
    pub fn new(target: &Path) -> Result<Self, CliError> {
        let name = target.file_name().map_or_else(|| "out".into(), |n| n.to_string_lossy().into_owned());
        let parent = match target.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&parent).map_err(|e| CliError::io(&parent, e))?;
        let tmp = parent.join(format!(".{name}.partial-{}", std::process::id()));
        if tmp.exists() {
            fs::remove_dir_all(&tmp).map_err(|e| CliError::io(&tmp, e))?;
        }
        fs::create_dir(&tmp).map_err(|e| CliError::io(&tmp, e))?;
        Ok(Staging { target: target.to_path_buf(), tmp, files: Vec::new(), committed: false })
    }

    pub fn target(&self) -> &Path {
        &self.target
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<(), CliError> {
        let path = self.tmp.join(name);
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        let entry = FileEntry { name: name.into(), bytes: contents.len() as u64, sha256: hex(&Sha256::digest(contents)) };
        match self.files.iter_mut().find(|f| f.name == name) {
            Some(f) => *f = entry,
            None => self.files.push(entry),
        }
        Ok(())
    }

    pub fn write_csv<S: AsRef<str>>(
        &mut self,
        name: &str,
        header: &[S],
        rows: impl IntoIterator<Item = Vec<f64>>,
    ) -> Result<(), CliError> {
        self.write(name, csv(header, rows).as_bytes())
    }

    pub fn files(&self) -> &[FileEntry] {
        &self.files
    }

    /// Writes `manifest` under `manifest_name` and moves every file into the target.
    pub fn commit(mut self, manifest_name: &str, manifest: &[u8]) -> Result<(), CliError> {
        let path = self.tmp.join(manifest_name);
        fs::write(&path, manifest).map_err(|e| CliError::io(&path, e))?;
        fs::create_dir_all(&self.target).map_err(|e| CliError::io(&self.target, e))?;
        let names: Vec<String> =
            self.files.iter().map(|f| f.name.clone()).chain(std::iter::once(manifest_name.to_string())).collect();
        for name in names {
            let (from, to) = (self.tmp.join(&name), self.target.join(&name));
            fs::rename(&from, &to).map_err(|e| CliError::io(&to, e))?;
        }
        fs::remove_dir_all(&self.tmp).map_err(|e| CliError::io(&self.tmp, e))?;
        self.committed = true;
        Ok(())
    }
}

impl Drop for Staging {
    fn drop(&mut self) {
        if !self.committed {
            let _ = fs::remove_dir_all(&self.tmp);
        }
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckRecord {
    /// Passes when `measured` is finite and at most `tolerance`.
    pub fn upper(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        CheckRecord { name: name.into(), measured, tolerance, passed: measured.is_finite() && measured <= tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub status: &'static str,
    pub wall_clock_seconds: f64,
    pub config: std::collections::BTreeMap<String, String>,
    pub checks: Vec<CheckRecord>,
    pub failed_checks: Vec<String>,
    pub files: Vec<FileEntry>,
}
