use alloc::vec::Vec;

use super::{predictor_importance, prune_features, train_forest, FeatureMask, FeatureMatrix, Forest, Prediction};
use crate::error::Result;
use crate::model::HyperParams;

/// A pruning mask and the classifier trained on the kept columns.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainedPipeline {
    pub hyper_params: HyperParams,
    pub mask: FeatureMask,
    pub classifier: Forest,
}

impl TrainedPipeline {
    /// Predicts from a full-length feature vector; the mask is applied first.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        self.classifier.predict(&self.mask.apply(x)?)
    }

    pub fn predict_rows(&self, x: &FeatureMatrix) -> Result<Vec<usize>> {
        (0..x.rows()).map(|r| Ok(self.predict(x.row(r))?.label)).collect()
    }
}

/// Stage one: a forest of `pruning_trees` ranks predictors and the threshold factor
/// selects columns. Stage two: `classifier_trees` trees learn on those columns only.
pub fn train_pipeline(x: &FeatureMatrix, y: &[usize], hp: &HyperParams) -> Result<TrainedPipeline> {
    hp.validate()?;
    let pruner = train_forest(x, y, hp.pruning_trees, hp.pruning_seed())?;
    let importance = predictor_importance(&pruner);
    let mask = prune_features(&importance, hp.alpha)?;
    let reduced = x.select_columns(mask.kept_indices());
    let classifier = train_forest(&reduced, y, hp.classifier_trees, hp.classifier_seed())?;
    Ok(TrainedPipeline {
        hyper_params: *hp,
        mask,
        classifier,
    })
}
