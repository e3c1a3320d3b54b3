//! Command-line front end. Progress goes to stderr through `log`; results go to files
//! under `--out` and short summaries to stdout.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use hdgkit_core::eval::{
    ablation_study, cross_view_splits, half_subject_splits, hyperparameter_sweep, run_protocol,
    validation_plan, ConfusionMatrix, FeatureCache, SplitPlan,
};
use hdgkit_core::features::extract_hdg;
use hdgkit_core::forest::{train_pipeline, FeatureMatrix};
use hdgkit_core::synth::generate_synthetic;
use hdgkit_core::{layout_from_config, ActionSample, ComponentSet, DatasetManifest};
use log::info;
use rayon::prelude::*;

use crate::config::{Protocol, RunConfig};
use crate::dataset::{load_dataset, load_sample, manifest_path, write_dataset};
use crate::error::{Error, Result};
use crate::manifest::load_manifest;
use crate::model::{load_model, save_model, SavedModel};
use crate::report::{
    fmt_g6, write_ablation_csv, write_confusion_csv, write_features_csv, write_predictions_csv,
    write_summary_csv, write_sweep_csv,
};

#[derive(Debug, Parser)]
#[command(name = "hdgkit", version, about = "HDG depth/skeleton action recognition toolkit")]
pub struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Seed for data synthesis and forest training.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset.
    Synth(SynthArgs),
    /// Extract HDG features for every sample into a CSV.
    Extract(ExtractArgs),
    /// Run an evaluation protocol and write per-plan reports.
    Eval(EvalArgs),
    /// Grid search over pruning trees and threshold factor on the validation plan.
    Sweep(SweepArgs),
    /// Train on every sample and save the model.
    Train(TrainArgs),
    /// Apply a saved model to a dataset.
    Predict(PredictArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub classes: Option<usize>,
    #[arg(long)]
    pub subjects: Option<usize>,
    #[arg(long)]
    pub views: Option<usize>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub frames: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub joints: Option<usize>,
    /// Depth noise standard deviation in millimetres.
    #[arg(long)]
    pub noise: Option<f64>,
    /// Joint position noise standard deviation in metres.
    #[arg(long)]
    pub skeleton_noise: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DatasetArgs {
    /// Manifest file, or a directory containing manifest.json.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FeatureArgs {
    /// Feature families, e.g. `all`, `jpd`, `hod,hodg`.
    #[arg(long)]
    pub components: Option<ComponentSet>,
    /// Subvolume grid as `nx,ny,nt`.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub grid: Option<Vec<usize>>,
    #[arg(long)]
    pub hod_bins: Option<usize>,
    #[arg(long)]
    pub jpd_bins: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ForestArgs {
    #[arg(long)]
    pub pruning_trees: Option<usize>,
    #[arg(long)]
    pub classifier_trees: Option<usize>,
    /// Threshold factor for importance pruning.
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub features: FeatureArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub features: FeatureArgs,
    #[command(flatten)]
    pub forest: ForestArgs,
    #[arg(long, value_enum)]
    pub protocol: Option<Protocol>,
    /// Also run all ten component combinations.
    #[arg(long)]
    pub ablation: bool,
    /// Evaluate only the first N plans.
    #[arg(long)]
    pub max_plans: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub features: FeatureArgs,
    /// Pruning-forest sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub trees: Option<Vec<usize>>,
    /// Threshold factors, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    #[arg(long)]
    pub classifier_trees: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub features: FeatureArgs,
    #[command(flatten)]
    pub forest: ForestArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    /// Model written by `train`.
    #[arg(long)]
    pub model: Option<PathBuf>,
}

impl FeatureArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        let f = &mut cfg.features;
        if let Some(c) = self.components {
            f.components = c;
        }
        if let Some(g) = &self.grid {
            f.grid = [g[0], g[1], g[2]];
        }
        if let Some(b) = self.hod_bins {
            f.hod_bins = b;
        }
        if let Some(b) = self.jpd_bins {
            f.jpd_bins = b;
        }
    }
}

impl ForestArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(t) = self.pruning_trees {
            cfg.forest.pruning_trees = t;
        }
        if let Some(t) = self.classifier_trees {
            cfg.forest.classifier_trees = t;
        }
        if let Some(a) = self.alpha {
            cfg.forest.alpha = a;
        }
    }
}

impl DatasetArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(d) = &self.dataset {
            cfg.dataset = Some(d.clone());
        }
    }
}

/// Merges the optional config file with the flags into a validated [`RunConfig`].
pub fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(j) = cli.jobs {
        cfg.jobs = Some(j);
    }
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    match &cli.command {
        Command::Synth(a) => {
            cfg.command = "synth".into();
            let s = &mut cfg.synth;
            let counts = [
                (a.classes, &mut s.num_classes),
                (a.subjects, &mut s.num_subjects),
                (a.views, &mut s.num_views),
                (a.reps, &mut s.reps_per_cell),
                (a.frames, &mut s.num_frames),
                (a.height, &mut s.frame_height),
                (a.width, &mut s.frame_width),
                (a.joints, &mut s.num_joints),
            ];
            for (flag, slot) in counts {
                if let Some(v) = flag {
                    *slot = v;
                }
            }
            if let Some(n) = a.noise {
                s.noise_level = n;
            }
            if let Some(n) = a.skeleton_noise {
                s.skeleton_noise = n;
            }
        }
        Command::Extract(a) => {
            cfg.command = "extract".into();
            a.dataset.apply(&mut cfg);
            a.features.apply(&mut cfg);
        }
        Command::Eval(a) => {
            cfg.command = "eval".into();
            a.dataset.apply(&mut cfg);
            a.features.apply(&mut cfg);
            a.forest.apply(&mut cfg);
            if let Some(p) = a.protocol {
                cfg.protocol = p;
            }
            cfg.ablation |= a.ablation;
            if a.max_plans.is_some() {
                cfg.max_plans = a.max_plans;
            }
        }
        Command::Sweep(a) => {
            cfg.command = "sweep".into();
            a.dataset.apply(&mut cfg);
            a.features.apply(&mut cfg);
            if let Some(t) = &a.trees {
                cfg.sweep.trees = t.clone();
            }
            if let Some(al) = &a.alpha {
                cfg.sweep.alpha = al.clone();
            }
            if let Some(t) = a.classifier_trees {
                cfg.forest.classifier_trees = t;
            }
        }
        Command::Train(a) => {
            cfg.command = "train".into();
            a.dataset.apply(&mut cfg);
            a.features.apply(&mut cfg);
            a.forest.apply(&mut cfg);
        }
        Command::Predict(a) => {
            cfg.command = "predict".into();
            a.dataset.apply(&mut cfg);
            if let Some(m) = &a.model {
                cfg.model = Some(m.clone());
            }
        }
    }
    cfg.finish()
}

/// Resolves the configuration, prepares the output directory and runs the command.
pub fn run(cli: &Cli) -> Result<()> {
    let cfg = resolve(cli)?;
    if let Some(j) = cfg.jobs {
        // Fails only if a pool already exists, which is harmless here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;
    cfg.save(&cfg.out)?;
    match &cli.command {
        Command::Synth(_) => cmd_synth(&cfg),
        Command::Extract(_) => cmd_extract(&cfg),
        Command::Eval(_) => cmd_eval(&cfg),
        Command::Sweep(_) => cmd_sweep(&cfg),
        Command::Train(_) => cmd_train(&cfg),
        Command::Predict(_) => cmd_predict(&cfg),
    }
}

fn cmd_synth(cfg: &RunConfig) -> Result<()> {
    info!("generating {} synthetic samples", cfg.synth.num_samples());
    let (manifest, samples) = generate_synthetic(&cfg.synth)?;
    write_dataset(&cfg.out, &manifest, &samples)?;
    println!("wrote {} samples to {}", samples.len(), cfg.out.display());
    Ok(())
}

fn cmd_extract(cfg: &RunConfig) -> Result<()> {
    let path = manifest_path(cfg.dataset()?);
    let manifest = load_manifest(&path)?;
    let root = path.parent().unwrap_or(Path::new("."));
    let layout = layout_from_config(&cfg.features, manifest.num_joints)?;
    info!("extracting {} features from {} samples", layout.total_len(), manifest.samples.len());
    let results: Vec<Result<Vec<f64>>> = manifest
        .samples
        .par_iter()
        .map(|e| {
            let sample = load_sample(root, &manifest, e)?;
            Ok(extract_hdg(&sample, &cfg.features)?.into_values())
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (e, r) in manifest.samples.iter().zip(&results) {
        match r {
            Ok(v) => rows.push((e.sample_id.as_str(), v.as_slice())),
            Err(err) => {
                log::error!("{}: {err}", e.sample_id);
                failures.push((e.sample_id.clone(), err.to_string()));
            }
        }
    }
    let out = cfg.out.join("features.csv");
    write_features_csv(&out, &layout, rows.iter().copied())?;
    if !failures.is_empty() {
        return Err(Error::Samples(failures));
    }
    println!("wrote {} rows x {} columns to {}", rows.len(), layout.total_len() + 1, out.display());
    Ok(())
}

fn plans_for(protocol: Protocol, manifest: &DatasetManifest, max_plans: Option<usize>) -> Result<Vec<SplitPlan>> {
    let mut plans = match protocol {
        Protocol::HalfSubject => half_subject_splits(manifest)?,
        Protocol::CrossView => cross_view_splits(manifest)?,
        Protocol::SingleSplit => vec![validation_plan(manifest)?],
    };
    if let Some(n) = max_plans {
        plans.truncate(n);
    }
    Ok(plans)
}

fn cmd_eval(cfg: &RunConfig) -> Result<()> {
    let (manifest, samples) = load_dataset(cfg.dataset()?)?;
    let plans = plans_for(cfg.protocol, &manifest, cfg.max_plans)?;
    info!("evaluating {} plans with {}", plans.len(), cfg.features.components);
    let result = run_protocol(&manifest, &samples, &cfg.features, &cfg.forest, &plans)?;
    for (i, o) in result.outcomes.iter().enumerate() {
        match o.report() {
            Some(r) => {
                info!("plan {i} {}: {:.4}", r.descriptor, r.average_accuracy);
                write_confusion_csv(&cfg.out.join(format!("confusion_{i:03}.csv")), &r.confusion)?;
            }
            None => log::warn!("plan {i} {} skipped", o.descriptor()),
        }
    }
    write_summary_csv(&cfg.out.join("summary.csv"), &result.outcomes, manifest.num_classes)?;
    if cfg.ablation {
        info!("running component ablation");
        let rows = ablation_study(&manifest, &samples, &cfg.features, &cfg.forest, &plans)?;
        write_ablation_csv(&cfg.out.join("ablation.csv"), &rows)?;
    }
    let mean = result
        .mean_accuracy
        .ok_or_else(|| Error::Usage("every plan was skipped; no accuracy to report".into()))?;
    println!("mean accuracy = {mean:.4} over {} plans", result.completed());
    Ok(())
}

fn cmd_sweep(cfg: &RunConfig) -> Result<()> {
    if cfg.sweep.trees.is_empty() || cfg.sweep.alpha.is_empty() {
        return Err(Error::Usage("sweep grids must be non-empty".into()));
    }
    let (manifest, samples) = load_dataset(cfg.dataset()?)?;
    let plan = validation_plan(&manifest)?;
    info!(
        "sweeping {} x {} cells on {}",
        cfg.sweep.trees.len(),
        cfg.sweep.alpha.len(),
        plan.descriptor
    );
    let grid = hyperparameter_sweep(
        &manifest,
        &samples,
        &cfg.features,
        &cfg.forest,
        &cfg.sweep.trees,
        &cfg.sweep.alpha,
        &[plan],
    )?;
    write_sweep_csv(&cfg.out.join("sweep.csv"), &grid)?;
    match grid.best() {
        Some((t, a, acc)) => println!("best: trees = {t}, alpha = {}, mean accuracy = {acc:.4}", fmt_g6(a)),
        None => println!("best: none (every cell failed)"),
    }
    Ok(())
}

fn feature_matrix(samples: &[ActionSample], cfg: &hdgkit_core::HdgConfig) -> Result<FeatureMatrix> {
    let mut cache = FeatureCache::new();
    cache.ensure(samples, cfg)?;
    let rows: Vec<&[f64]> = samples
        .iter()
        .map(|s| cache.get(&s.sample_id, cfg).expect("cached"))
        .collect();
    Ok(FeatureMatrix::from_rows(&rows)?)
}

fn cmd_train(cfg: &RunConfig) -> Result<()> {
    let (manifest, samples) = load_dataset(cfg.dataset()?)?;
    info!("training on {} samples", samples.len());
    let x = feature_matrix(&samples, &cfg.features)?;
    let y: Vec<usize> = samples.iter().map(|s| s.class_label).collect();
    let pipeline = train_pipeline(&x, &y, &cfg.forest)?;
    let kept = pipeline.mask.kept_indices().len();
    let model = SavedModel::new(cfg.features.clone(), manifest.num_joints, manifest.num_classes, pipeline);
    let out = cfg.out.join("model.json");
    save_model(&out, &model)?;
    println!("trained on {} samples, kept {kept} of {} features, saved {}", samples.len(), x.cols(), out.display());
    Ok(())
}

fn cmd_predict(cfg: &RunConfig) -> Result<()> {
    let model_path = cfg
        .model
        .as_deref()
        .ok_or_else(|| Error::Usage("no model given (use --model)".into()))?;
    let model = load_model(model_path)?;
    let (manifest, samples) = load_dataset(cfg.dataset()?)?;
    if manifest.num_joints != model.num_joints {
        return Err(Error::Usage(format!(
            "model expects {} joints, dataset has {}",
            model.num_joints, manifest.num_joints
        )));
    }
    let x = feature_matrix(&samples, &model.features)?;
    let num_classes = model.num_classes;
    let mut rows = Vec::with_capacity(samples.len());
    let mut truth = Vec::new();
    let mut predicted = Vec::new();
    for (r, s) in samples.iter().enumerate() {
        let p = model.pipeline.predict(x.row(r))?;
        if s.class_label < num_classes {
            truth.push(s.class_label);
            predicted.push(p.label);
        }
        rows.push((s.sample_id.clone(), s.class_label, p.label, p.votes));
    }
    write_predictions_csv(&cfg.out.join("predictions.csv"), num_classes, &rows)?;
    let cm = ConfusionMatrix::from_predictions(num_classes, &truth, &predicted)?;
    write_confusion_csv(&cfg.out.join("confusion.csv"), &cm)?;
    match cm.macro_accuracy() {
        Some(acc) => println!("accuracy = {acc:.4} over {} samples", samples.len()),
        None => println!("predicted {} samples", samples.len()),
    }
    Ok(())
}
