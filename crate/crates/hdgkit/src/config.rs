//! The resolved settings of one run, stored as TOML next to every output.

use std::fs;
use std::path::{Path, PathBuf};

use hdgkit_core::synth::SynthSpec;
use hdgkit_core::{HdgConfig, HyperParams};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const RUN_CONFIG_FILE: &str = "run_config.toml";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    /// Every choice of half the subjects for training.
    #[default]
    HalfSubject,
    /// Each pair of views trains, each remaining view tests.
    CrossView,
    /// Only the validation plan.
    SingleSplit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepSettings {
    pub trees: Vec<usize>,
    pub alpha: Vec<f64>,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            trees: vec![64, 130],
            alpha: vec![0.0, 3.5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Subcommand that produced this file; informational only.
    pub command: String,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub out: PathBuf,
    pub dataset: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub protocol: Protocol,
    pub max_plans: Option<usize>,
    pub ablation: bool,
    pub features: HdgConfig,
    pub forest: HyperParams,
    pub sweep: SweepSettings,
    pub synth: SynthSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: String::new(),
            seed: 0,
            jobs: None,
            out: PathBuf::from("hdgkit-out"),
            dataset: None,
            model: None,
            protocol: Protocol::default(),
            max_plans: None,
            ablation: false,
            features: HdgConfig::msr_compat(),
            forest: HyperParams::default(),
            sweep: SweepSettings::default(),
            synth: SynthSpec::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start].matches('\n').count() + 1)
                .unwrap_or(0);
            Error::Parse {
                path: path.to_path_buf(),
                line,
                message: e.message().to_string(),
            }
        })
    }

    /// Copies `seed` into the forest and synthetic settings and checks every section.
    pub fn finish(mut self) -> Result<Self> {
        if self.seed > i64::MAX as u64 {
            return Err(Error::Usage(format!("--seed must be at most {}", i64::MAX)));
        }
        if self.jobs == Some(0) {
            return Err(Error::Usage("--jobs must be >= 1".into()));
        }
        self.forest.rng_seed = self.seed;
        self.synth.rng_seed = self.seed;
        self.features.validate()?;
        self.forest.validate()?;
        self.synth.validate()?;
        Ok(self)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let path = dir.join(RUN_CONFIG_FILE);
        fs::write(&path, self.to_toml()).map_err(|e| Error::io(&path, e))
    }

    pub fn dataset(&self) -> Result<&Path> {
        self.dataset
            .as_deref()
            .ok_or_else(|| Error::Usage("no dataset given (use --dataset or set `dataset` in the config file)".into()))
    }
}
