//! Whole datasets on disk: a manifest plus the depth and skeleton files it references.

use std::fs;
use std::path::{Path, PathBuf};

use hdgkit_core::{ActionSample, DatasetManifest, ManifestEntry};
use rayon::prelude::*;

use crate::depb::{read_depb, write_depb};
use crate::error::{Error, Result};
use crate::manifest::{load_manifest, save_manifest};
use crate::skeleton::{read_skeleton, write_skeleton};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Accepts either a manifest file or a directory holding `manifest.json`.
pub fn manifest_path(dataset: &Path) -> PathBuf {
    if dataset.is_dir() {
        dataset.join(MANIFEST_FILE)
    } else {
        dataset.to_path_buf()
    }
}

pub fn load_sample(root: &Path, manifest: &DatasetManifest, entry: &ManifestEntry) -> Result<ActionSample> {
    let depth = read_depb(&root.join(&entry.depth_path))?;
    let skeleton = read_skeleton(
        &root.join(&entry.skeleton_path),
        manifest.num_joints,
        manifest.reference_joint,
    )?;
    Ok(ActionSample::new(
        entry.sample_id.clone(),
        entry.class_label,
        entry.subject_id,
        entry.view_id,
        Some(depth),
        Some(skeleton),
    )?)
}

/// Loads every sample of a manifest, in manifest order. Failures are collected per
/// sample id rather than stopping at the first.
pub fn load_dataset(dataset: &Path) -> Result<(DatasetManifest, Vec<ActionSample>)> {
    let path = manifest_path(dataset);
    let manifest = load_manifest(&path)?;
    let root = path.parent().unwrap_or(Path::new("."));
    let loaded: Vec<Result<ActionSample>> = manifest
        .samples
        .par_iter()
        .map(|e| load_sample(root, &manifest, e))
        .collect();
    let mut samples = Vec::with_capacity(loaded.len());
    let mut failures = Vec::new();
    for (entry, r) in manifest.samples.iter().zip(loaded) {
        match r {
            Ok(s) => samples.push(s),
            Err(e) => failures.push((entry.sample_id.clone(), e.to_string())),
        }
    }
    if !failures.is_empty() {
        return Err(Error::Samples(failures));
    }
    Ok((manifest, samples))
}

/// Writes the manifest and every sample's files below `dir`.
pub fn write_dataset(dir: &Path, manifest: &DatasetManifest, samples: &[ActionSample]) -> Result<()> {
    for entry in &manifest.samples {
        for rel in [&entry.depth_path, &entry.skeleton_path] {
            if let Some(parent) = dir.join(rel).parent() {
                fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
        }
    }
    manifest
        .samples
        .par_iter()
        .zip(samples)
        .try_for_each(|(entry, s)| -> Result<()> {
            if let Some(d) = &s.depth {
                write_depb(&dir.join(&entry.depth_path), d)?;
            }
            if let Some(sk) = &s.skeleton {
                write_skeleton(&dir.join(&entry.skeleton_path), sk)?;
            }
            Ok(())
        })?;
    save_manifest(&dir.join(MANIFEST_FILE), manifest)
}
