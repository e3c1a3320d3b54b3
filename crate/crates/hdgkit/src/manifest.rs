//! Manifest JSON: top-level `name`, `num_classes`, `num_subjects`, `num_views`,
//! optional `num_joints` (default 20) and `reference_joint` (default 0), and `samples`.

use std::fs;
use std::path::Path;

use hdgkit_core::DatasetManifest;

use crate::error::{Error, Result};

pub fn parse_manifest(text: &str, origin: &Path) -> Result<DatasetManifest> {
    let manifest: DatasetManifest = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        line: e.line(),
        message: format!("column {}: {e}", e.column()),
    })?;
    manifest.validate()?;
    Ok(manifest)
}

/// Reads and validates a manifest. Referenced sample files are not opened.
pub fn load_manifest(path: &Path) -> Result<DatasetManifest> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_manifest(&text, path)
}

pub fn save_manifest(path: &Path, manifest: &DatasetManifest) -> Result<()> {
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
