//! Trained pipelines persisted as JSON. Floats are written in shortest round-trip form
//! and parsed exactly, so a reloaded model predicts bit-for-bit like the original.

use std::fs;
use std::path::Path;

use hdgkit_core::forest::TrainedPipeline;
use hdgkit_core::HdgConfig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MODEL_FORMAT: &str = "hdgkit-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    pub format: String,
    pub version: u32,
    /// Feature extraction settings the classifier was trained with.
    pub features: HdgConfig,
    pub num_joints: usize,
    pub num_classes: usize,
    pub pipeline: TrainedPipeline,
}

impl SavedModel {
    pub fn new(features: HdgConfig, num_joints: usize, num_classes: usize, pipeline: TrainedPipeline) -> Self {
        Self {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            features,
            num_joints,
            num_classes,
            pipeline,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn from_json(text: &str, origin: &Path) -> Result<Self> {
        let model: SavedModel = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            line: e.line(),
            message: format!("column {}: {e}", e.column()),
        })?;
        if model.format != MODEL_FORMAT || model.version != MODEL_VERSION {
            return Err(Error::format(
                origin,
                format!("unsupported model format {} v{}", model.format, model.version),
            ));
        }
        Ok(model)
    }
}

pub fn save_model(path: &Path, model: &SavedModel) -> Result<()> {
    fs::write(path, model.to_json()).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<SavedModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    SavedModel::from_json(&text, path)
}
