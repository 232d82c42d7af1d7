//! CSV series and JSON manifest emission.
//!
//! CSV contract: `#`-prefixed metadata/units lines, then a plain header row,
//! then comma-separated data rows. Floats are written with Rust's shortest
//! round-trip formatting, so identical runs produce identical bytes. LF line
//! endings, UTF-8.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::CliError;

pub struct Column {
    pub name: &'static str,
    pub unit: &'static str,
}

pub struct Check {
    pub name: String,
    pub pass: bool,
}

pub struct ScenarioOutput {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
    pub checks: Vec<Check>,
    /// Extra `# key = value` metadata lines.
    pub meta: Vec<(String, String)>,
}

impl ScenarioOutput {
    pub fn check(&mut self, name: &str, pass: bool) {
        self.checks.push(Check { name: name.into(), pass });
    }

    pub fn meta_f64(&mut self, key: &str, value: f64) {
        self.meta.push((key.into(), format!("{value}")));
    }
}

pub fn write_csv(
    path: &Path,
    scenario: &str,
    version: &str,
    out: &ScenarioOutput,
) -> Result<(), CliError> {
    let mut text = String::new();
    let _ = writeln!(text, "# cvqdyn {version} scenario={scenario}");
    let units: Vec<String> =
        out.columns.iter().map(|c| format!("{}={}", c.name, c.unit)).collect();
    let _ = writeln!(text, "# units: {}", units.join(", "));
    for (k, v) in &out.meta {
        let _ = writeln!(text, "# {k} = {v}");
    }
    let names: Vec<&str> = out.columns.iter().map(|c| c.name).collect();
    let _ = writeln!(text, "{}", names.join(","));
    for (i, row) in out.rows.iter().enumerate() {
        if row.len() != out.columns.len() {
            return Err(CliError::Invariant(format!(
                "row {i} has {} fields, expected {}",
                row.len(),
                out.columns.len()
            )));
        }
        let mut first = true;
        for v in row {
            if !v.is_finite() {
                return Err(CliError::Invariant(format!(
                    "non-finite value in column '{}' at row {i}",
                    out.columns[row.iter().position(|x| !x.is_finite()).unwrap()].name
                )));
            }
            if !first {
                text.push(',');
            }
            let _ = write!(text, "{v}");
            first = false;
        }
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| CliError::Io(format!("writing {path:?}: {e}")))
}

pub fn write_manifest(
    path: &Path,
    config_sha256: &str,
    version: &str,
    scenario: &str,
    wall_seconds: f64,
    checks: &[Check],
) -> Result<(), CliError> {
    let checks_json: Vec<serde_json::Value> = checks
        .iter()
        .map(|c| serde_json::json!({ "name": c.name, "pass": c.pass }))
        .collect();
    let manifest = serde_json::json!({
        "config_sha256": config_sha256,
        "version": version,
        "scenario": scenario,
        "wall_seconds": wall_seconds,
        "checks": checks_json,
    });
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::Io(format!("manifest serialization: {e}")))?;
    fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("writing {path:?}: {e}")))
}
