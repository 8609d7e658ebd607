//! Verification reports and atomic artifact emission.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Pass/fail record of one verification run.
///
/// `pass` is false whenever any hypothesis check fails; hypothesis failure
/// is reported, never silently skipped.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct TheoremReport<T: Real> {
    pub name: String,
    pub hypotheses_checked: Vec<(String, bool)>,
    pub empirical_constant: Option<T>,
    pub tolerances: BTreeMap<String, T>,
    pub pass: bool,
    pub artifacts: Vec<String>,
}

impl<T: Real> TheoremReport<T> {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            hypotheses_checked: Vec::new(),
            empirical_constant: None,
            tolerances: BTreeMap::new(),
            pass: false,
        artifacts: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool) -> bool {
        self.hypotheses_checked.push((name.into(), ok));
        ok
    }

    pub fn tolerance(&mut self, name: impl Into<String>, value: T) {
        self.tolerances.insert(name.into(), value);
    }

    pub fn all_checks_pass(&self) -> bool {
        self.hypotheses_checked.iter().all(|&(_, ok)| ok)
    }

    /// Name of the first failing check, if any.
    pub fn first_failure(&self) -> Option<&str> {
        self.hypotheses_checked
            .iter()
            .find(|&&(_, ok)| !ok)
            .map(|(n, _)| n.as_str())
    }
}

/// Write bytes atomically: temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
    ));
    // avoid collisions from parallel jobs writing distinct reports
    let mut k = 0u32;
    while tmp.exists() {
        k += 1;
        tmp = dir.join(format!(
            ".{}.tmp{k}",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
        ));
    }
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.flush()?;
    }
    fs::rename(&tmp, path)
}

/// Serialize a report to pretty JSON and write it atomically.
pub fn write_report_json<T: Real>(
    report: &TheoremReport<T>,
    path: &Path,
) -> std::io::Result<()> {
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    write_atomic(path, json.as_bytes())
}

/// Emit a defect-comparison CSV `(tau, defect_g, defect_G)` for plotting.
pub fn write_defect_csv<T: Real>(
    rows: &[(T, T, T)],
    path: &Path,
) -> std::io::Result<()> {
    let mut out = String::from("tau,defect_g,defect_G\n");
    for (tau, dg, dgg) in rows {
        out.push_str(&format!("{tau:.16e},{dg:.16e},{dgg:.16e}\n"));
    }
    write_atomic(path, out.as_bytes())
}

/// Helper owning an optional artifact directory.
#[derive(Debug, Clone, Default)]
pub struct ArtifactSink {
    pub dir: Option<PathBuf>,
}

impl ArtifactSink {
    pub fn none() -> Self {
        Self { dir: None }
    }

    pub fn into_dir(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: Some(dir.into()),
        }
    }

    pub fn path(&self, file: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(file))
    }
}
