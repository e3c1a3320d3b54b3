use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::metrics::{ConfusionMatrix, EvalReport};
use super::splits::SplitPlan;
use crate::dataset::DatasetManifest;
use crate::error::{Error, Result};
use crate::features::extract_hdg;
use crate::forest::{train_pipeline, FeatureMatrix};
use crate::model::{layout_from_config, ActionSample, Component, ComponentSet, HdgConfig, HyperParams};
use crate::par;

/// Extracted feature vectors keyed by `(config fingerprint, sample id)`.
#[derive(Debug, Default, Clone)]
pub struct FeatureCache {
    entries: BTreeMap<(u64, String), Vec<f64>>,
}

impl FeatureCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Extracts every sample not yet cached under `config`. Extraction runs in parallel;
    /// insertion happens afterwards on this thread.
    pub fn ensure(&mut self, samples: &[ActionSample], config: &HdgConfig) -> Result<()> {
        let fp = config.fingerprint();
        let missing: Vec<&ActionSample> = samples
            .iter()
            .filter(|s| !self.entries.contains_key(&(fp, s.sample_id.clone())))
            .collect();
        let extracted = par::map(&missing, |_, s| extract_hdg(s, config));
        for (s, fv) in missing.iter().zip(extracted) {
            self.entries
                .insert((fp, s.sample_id.clone()), fv?.into_values());
        }
        Ok(())
    }

    pub fn get(&self, sample_id: &str, config: &HdgConfig) -> Option<&[f64]> {
        self.entries
            .get(&(config.fingerprint(), sample_id.to_string()))
            .map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlanOutcome {
    Completed(EvalReport),
    Skipped { descriptor: String, reason: String },
}

impl PlanOutcome {
    pub fn descriptor(&self) -> &str {
        match self {
            PlanOutcome::Completed(r) => &r.descriptor,
            PlanOutcome::Skipped { descriptor, .. } => descriptor,
        }
    }

    pub fn report(&self) -> Option<&EvalReport> {
        match self {
            PlanOutcome::Completed(r) => Some(r),
            PlanOutcome::Skipped { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub outcomes: Vec<PlanOutcome>,
    /// Mean of the completed plans' average accuracies.
    pub mean_accuracy: Option<f64>,
}

impl ProtocolResult {
    pub fn reports(&self) -> impl Iterator<Item = &EvalReport> {
        self.outcomes.iter().filter_map(PlanOutcome::report)
    }

    pub fn completed(&self) -> usize {
        self.reports().count()
    }
}

/// Mean of the completed reports' average accuracies.
pub fn mean_accuracy<'a>(reports: impl IntoIterator<Item = &'a EvalReport>) -> Option<f64> {
    let accs: Vec<f64> = reports.into_iter().map(|r| r.average_accuracy).collect();
    if accs.is_empty() {
        None
    } else {
        Some(accs.iter().sum::<f64>() / accs.len() as f64)
    }
}

/// Extracts features for every sample, then evaluates each plan.
pub fn run_protocol(
    manifest: &DatasetManifest,
    samples: &[ActionSample],
    config: &HdgConfig,
    hp: &HyperParams,
    plans: &[SplitPlan],
) -> Result<ProtocolResult> {
    let mut cache = FeatureCache::new();
    cache.ensure(samples, config)?;
    evaluate_plans(&cache, manifest, config, hp, plans)
}

/// Runs [`train_pipeline`] on each plan's training rows and scores its test rows, using
/// features already in `cache`.
///
/// A plan whose training set lacks a class that appears in its test set is skipped
/// with a reason. Invalid plans and training failures are errors.
pub fn evaluate_plans(
    cache: &FeatureCache,
    manifest: &DatasetManifest,
    config: &HdgConfig,
    hp: &HyperParams,
    plans: &[SplitPlan],
) -> Result<ProtocolResult> {
    hp.validate()?;
    for p in plans {
        p.validate(manifest)?;
    }
    let labels: BTreeMap<&str, usize> = manifest
        .samples
        .iter()
        .map(|s| (s.sample_id.as_str(), s.class_label))
        .collect();
    let rows_of = |ids: &[String]| -> Result<(FeatureMatrix, Vec<usize>)> {
        let mut rows = Vec::with_capacity(ids.len());
        for id in ids {
            rows.push(
                cache
                    .get(id, config)
                    .ok_or_else(|| Error::UnknownSample(id.clone()))?,
            );
        }
        let y = ids.iter().map(|id| labels[id.as_str()]).collect();
        Ok((FeatureMatrix::from_rows(&rows)?, y))
    };

    let outcomes = par::map(plans, |_, plan| -> Result<PlanOutcome> {
        let (x_train, y_train) = rows_of(&plan.train_ids)?;
        let (x_test, y_test) = rows_of(&plan.test_ids)?;
        let train_classes: BTreeSet<usize> = y_train.iter().copied().collect();
        if let Some(c) = y_test.iter().find(|c| !train_classes.contains(c)) {
            return Ok(PlanOutcome::Skipped {
                descriptor: plan.descriptor.clone(),
                reason: alloc::format!("training set has no samples of class {c}"),
            });
        }
        if train_classes.len() < 2 {
            return Ok(PlanOutcome::Skipped {
                descriptor: plan.descriptor.clone(),
                reason: "training set has a single class".into(),
            });
        }
        let pipeline = train_pipeline(&x_train, &y_train, hp)?;
        let predicted = pipeline.predict_rows(&x_test)?;
        let confusion = ConfusionMatrix::from_predictions(manifest.num_classes, &y_test, &predicted)?;
        Ok(PlanOutcome::Completed(EvalReport::new(
            plan.descriptor.clone(),
            confusion,
            config.clone(),
            *hp,
            pipeline.mask.kept_indices().len(),
            x_train.cols(),
        )?))
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let mean_accuracy = mean_accuracy(outcomes.iter().filter_map(PlanOutcome::report));
    Ok(ProtocolResult {
        outcomes,
        mean_accuracy,
    })
}

/// The ten component combinations compared in the ablation, in report order.
pub const ABLATION_COMBINATIONS: [&[Component]; 10] = {
    use Component::*;
    [
        &[Hod],
        &[Hodg],
        &[Jpd],
        &[Jmv],
        &[Hod, Hodg],
        &[Jpd, Jmv],
        &[Hod, Hodg, Jpd],
        &[Hod, Hodg, Jmv],
        &[Hodg, Jpd, Jmv],
        &[Hod, Hodg, Jpd, Jmv],
    ]
};

#[derive(Debug, Clone, PartialEq)]
pub struct AblationRow {
    pub components: ComponentSet,
    pub feature_len: usize,
    pub mean_accuracy: Option<f64>,
    pub completed_plans: usize,
    /// Set when training failed for this combination (for example an empty mask).
    pub failure: Option<String>,
}

/// Runs the protocol once per entry of [`ABLATION_COMBINATIONS`].
pub fn ablation_study(
    manifest: &DatasetManifest,
    samples: &[ActionSample],
    base_config: &HdgConfig,
    hp: &HyperParams,
    plans: &[SplitPlan],
) -> Result<Vec<AblationRow>> {
    let mut cache = FeatureCache::new();
    let mut rows = Vec::with_capacity(ABLATION_COMBINATIONS.len());
    for combo in ABLATION_COMBINATIONS {
        let components = ComponentSet::of(combo);
        let config = base_config.clone().with_components(components);
        let feature_len = layout_from_config(&config, manifest.num_joints)?.total_len();
        cache.ensure(samples, &config)?;
        let row = match evaluate_plans(&cache, manifest, &config, hp, plans) {
            Ok(result) => AblationRow {
                components,
                feature_len,
                mean_accuracy: result.mean_accuracy,
                completed_plans: result.completed(),
                failure: None,
            },
            Err(e @ Error::InvalidPlan(_)) | Err(e @ Error::UnknownSample(_)) => return Err(e),
            Err(e) => AblationRow {
                components,
                feature_len,
                mean_accuracy: None,
                completed_plans: 0,
                failure: Some(e.to_string()),
            },
        };
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepCell {
    Ok { mean_accuracy: f64 },
    Failed { reason: String },
}

/// Mean accuracy for each (pruning trees, alpha) pair, row-major over trees.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub trees: Vec<usize>,
    pub alphas: Vec<f64>,
    pub cells: Vec<SweepCell>,
}

impl SweepGrid {
    pub fn cell(&self, tree_idx: usize, alpha_idx: usize) -> &SweepCell {
        &self.cells[tree_idx * self.alphas.len() + alpha_idx]
    }

    /// Highest-accuracy cell as `(trees, alpha, accuracy)`. Ties prefer fewer trees,
    /// then the smaller alpha.
    pub fn best(&self) -> Option<(usize, f64, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for (ti, &t) in self.trees.iter().enumerate() {
            for (ai, &a) in self.alphas.iter().enumerate() {
                let SweepCell::Ok { mean_accuracy } = *self.cell(ti, ai) else {
                    continue;
                };
                let better = match best {
                    None => true,
                    Some((bt, ba, bacc)) => {
                        mean_accuracy > bacc
                            || (mean_accuracy == bacc && (t < bt || (t == bt && a < ba)))
                    }
                };
                if better {
                    best = Some((t, a, mean_accuracy));
                }
            }
        }
        best
    }
}

/// Evaluates `plans` for every (pruning trees, alpha) pair. Cells whose training fails,
/// for instance because alpha empties the mask, are recorded as failed.
pub fn hyperparameter_sweep(
    manifest: &DatasetManifest,
    samples: &[ActionSample],
    config: &HdgConfig,
    base_hp: &HyperParams,
    trees_grid: &[usize],
    alpha_grid: &[f64],
    plans: &[SplitPlan],
) -> Result<SweepGrid> {
    if trees_grid.is_empty() {
        return Err(Error::EmptyGrid("trees"));
    }
    if alpha_grid.is_empty() {
        return Err(Error::EmptyGrid("alpha"));
    }
    for p in plans {
        p.validate(manifest)?;
    }
    let mut cache = FeatureCache::new();
    cache.ensure(samples, config)?;
    let pairs: Vec<(usize, f64)> = trees_grid
        .iter()
        .flat_map(|&t| alpha_grid.iter().map(move |&a| (t, a)))
        .collect();
    let cells = par::map(&pairs, |_, &(trees, alpha)| {
        let hp = HyperParams {
            pruning_trees: trees,
            alpha,
            ..*base_hp
        };
        match evaluate_plans(&cache, manifest, config, &hp, plans) {
            Ok(ProtocolResult {
                mean_accuracy: Some(m),
                ..
            }) => SweepCell::Ok { mean_accuracy: m },
            Ok(_) => SweepCell::Failed {
                reason: "no plan completed".into(),
            },
            Err(e) => SweepCell::Failed {
                reason: e.to_string(),
            },
        }
    });
    Ok(SweepGrid {
        trees: trees_grid.to_vec(),
        alphas: alpha_grid.to_vec(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn best_cell_tie_break() {
        let grid = SweepGrid {
            trees: vec![130, 64],
            alphas: vec![3.5, 0.0],
            cells: vec![
                SweepCell::Ok { mean_accuracy: 0.9 },
                SweepCell::Ok { mean_accuracy: 0.9 },
                SweepCell::Ok { mean_accuracy: 0.9 },
                SweepCell::Ok { mean_accuracy: 0.9 },
            ],
        };
        assert_eq!(grid.best(), Some((64, 0.0, 0.9)));
        let grid = SweepGrid {
            trees: vec![64, 130],
            alphas: vec![0.0, 3.5],
            cells: vec![
                SweepCell::Failed { reason: "x".into() },
                SweepCell::Ok { mean_accuracy: 0.5 },
                SweepCell::Ok { mean_accuracy: 0.7 },
                SweepCell::Ok { mean_accuracy: 0.7 },
            ],
        };
        assert_eq!(grid.best(), Some((130, 0.0, 0.7)));
    }

    #[test]
    fn ablation_order() {
        let names: Vec<String> = ABLATION_COMBINATIONS
            .iter()
            .map(|c| alloc::format!("{}", ComponentSet::of(c)))
            .collect();
        assert_eq!(
            names,
            [
                "hod",
                "hodg",
                "jpd",
                "jmv",
                "hod+hodg",
                "jpd+jmv",
                "hod+hodg+jpd",
                "hod+hodg+jmv",
                "hodg+jpd+jmv",
                "hod+hodg+jpd+jmv"
            ]
        );
    }
}
