use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One row of a dataset manifest. Paths are relative to the manifest's directory.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ManifestEntry {
    pub sample_id: String,
    pub class_label: usize,
    pub subject_id: usize,
    pub view_id: usize,
    pub depth_path: String,
    pub skeleton_path: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DatasetManifest {
    pub name: String,
    pub num_classes: usize,
    pub num_subjects: usize,
    pub num_views: usize,
    /// Joints per skeleton frame; 20 when omitted.
    #[cfg_attr(feature = "serde", serde(default = "default_num_joints"))]
    pub num_joints: usize,
    #[cfg_attr(feature = "serde", serde(default))]
    pub reference_joint: usize,
    pub samples: Vec<ManifestEntry>,
}

#[cfg(feature = "serde")]
fn default_num_joints() -> usize {
    20
}

impl DatasetManifest {
    /// Checks id uniqueness, label/subject/view ranges and per-class coverage.
    pub fn validate(&self) -> Result<()> {
        if self.num_classes == 0 || self.num_subjects == 0 || self.num_views == 0 {
            return Err(Error::Manifest(
                "num_classes, num_subjects and num_views must be >= 1".into(),
            ));
        }
        if self.num_joints == 0 || self.reference_joint >= self.num_joints {
            return Err(Error::Manifest(alloc::format!(
                "reference_joint {} out of range for {} joints",
                self.reference_joint,
                self.num_joints
            )));
        }
        if self.samples.is_empty() {
            return Err(Error::Manifest("manifest lists no samples".into()));
        }
        let mut seen = BTreeSet::new();
        let mut classes = alloc::vec![false; self.num_classes];
        for s in &self.samples {
            if !seen.insert(s.sample_id.as_str()) {
                return Err(Error::Manifest(alloc::format!(
                    "duplicate sample_id {}",
                    s.sample_id
                )));
            }
            let checks = [
                ("class_label", s.class_label, self.num_classes),
                ("subject_id", s.subject_id, self.num_subjects),
                ("view_id", s.view_id, self.num_views),
            ];
            for (field, value, bound) in checks {
                if value >= bound {
                    return Err(Error::Manifest(alloc::format!(
                        "sample {}: {field} {value} out of range (must be < {bound})",
                        s.sample_id
                    )));
                }
            }
            classes[s.class_label] = true;
        }
        if let Some(c) = classes.iter().position(|&seen| !seen) {
            return Err(Error::Manifest(alloc::format!("class {c} has no samples")));
        }
        Ok(())
    }

    pub fn entry(&self, sample_id: &str) -> Option<&ManifestEntry> {
        self.samples.iter().find(|s| s.sample_id == sample_id)
    }

    /// Distinct subject ids present in the samples, ascending.
    pub fn subjects(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.samples.iter().map(|s| s.subject_id).collect();
        set.into_iter().collect()
    }
}
