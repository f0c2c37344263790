//! Output files: columnar CSVs and the per-run manifest.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a value
//! read back from any emitted CSV parses to the bit-identical `f64`. That
//! makes re-summarizing a written trace exactly equivalent to summarizing
//! the in-memory one, and makes repeated runs byte-identical. Manifests
//! carry no timestamps for the same reason.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::{ConfigEcho, RunConfig};

/// Shortest decimal form that parses back to the same `f64`.
pub fn fmt_float(v: f64) -> String {
    format!("{v}")
}

/// Optional float column: empty cell when absent.
pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

/// Writes one CSV with the given header and rows, creating the directory.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    }
    let mut writer = csv::Writer::from_path(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    config: ConfigEcho,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    results: serde_json::Map<String, serde_json::Value>,
}

/// Writes `<command>_manifest.json` beside the command's outputs.
///
/// The manifest echoes the fully resolved configuration plus any
/// command-specific results (such as the discount factor actually used),
/// which is everything needed to reproduce the run bit for bit.
pub fn write_manifest(
    out_dir: &Path,
    command: &str,
    cfg: &RunConfig,
    results: serde_json::Map<String, serde_json::Value>,
) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
    let manifest = Manifest {
        command,
        version: env!("CARGO_PKG_VERSION"),
        config: cfg.echo(),
        results,
    };
    let path = out_dir.join(format!("{}_manifest.json", command.replace('-', "_")));
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

/// Confidence level as a compact percent label: 0.95 -> "95", 0.995 -> "99.5".
pub fn level_label(p: f64) -> String {
    let pct = p * 100.0;
    if (pct - pct.round()).abs() < 1e-9 {
        format!("{}", pct.round())
    } else {
        format!("{pct}")
    }
}
