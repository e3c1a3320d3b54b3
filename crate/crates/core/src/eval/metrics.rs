use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{HdgConfig, HyperParams};

/// `C x C` counts; rows are the true class, columns the prediction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    num_classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(num_classes: usize) -> Self {
        Self {
            num_classes,
            counts: vec![0; num_classes * num_classes],
        }
    }

    pub fn from_counts(num_classes: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != num_classes * num_classes {
            return Err(Error::ShapeMismatch {
                expected: num_classes * num_classes,
                actual: counts.len(),
            });
        }
        Ok(Self { num_classes, counts })
    }

    pub fn from_predictions(num_classes: usize, truth: &[usize], predicted: &[usize]) -> Result<Self> {
        if truth.len() != predicted.len() {
            return Err(Error::ShapeMismatch {
                expected: truth.len(),
                actual: predicted.len(),
            });
        }
        let mut m = Self::new(num_classes);
        for (&t, &p) in truth.iter().zip(predicted) {
            let bound = t.max(p);
            if bound >= num_classes {
                return Err(Error::ShapeMismatch {
                    expected: num_classes,
                    actual: bound + 1,
                });
            }
            m.counts[t * num_classes + p] += 1;
        }
        Ok(m)
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    #[inline]
    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.num_classes + predicted]
    }

    pub fn row(&self, truth: usize) -> &[u64] {
        &self.counts[truth * self.num_classes..(truth + 1) * self.num_classes]
    }

    pub fn row_sum(&self, truth: usize) -> u64 {
        self.row(truth).iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.num_classes).map(|c| self.get(c, c)).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Accuracy of every class that has test samples; `None` for empty rows.
    pub fn per_class_accuracy(&self) -> Vec<Option<f64>> {
        (0..self.num_classes)
            .map(|c| class_accuracy(self, c).ok())
            .collect()
    }

    /// Unweighted mean of the per-class accuracies over non-empty rows.
    pub fn macro_accuracy(&self) -> Option<f64> {
        let accs: Vec<f64> = self.per_class_accuracy().into_iter().flatten().collect();
        if accs.is_empty() {
            None
        } else {
            Some(accs.iter().sum::<f64>() / accs.len() as f64)
        }
    }
}

/// Correct labels of class `a` over all test labels of class `a`.
pub fn class_accuracy(confusion: &ConfusionMatrix, a: usize) -> Result<f64> {
    if a >= confusion.num_classes {
        return Err(Error::EmptyClass(a));
    }
    let total = confusion.row_sum(a);
    if total == 0 {
        return Err(Error::EmptyClass(a));
    }
    Ok(confusion.get(a, a) as f64 / total as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub descriptor: String,
    pub confusion: ConfusionMatrix,
    pub per_class_accuracy: Vec<Option<f64>>,
    pub average_accuracy: f64,
    pub config: HdgConfig,
    pub hyper_params: HyperParams,
    /// Columns the classifier saw after pruning, out of `total_features`.
    pub kept_features: usize,
    pub total_features: usize,
}

impl EvalReport {
    pub fn new(
        descriptor: String,
        confusion: ConfusionMatrix,
        config: HdgConfig,
        hyper_params: HyperParams,
        kept_features: usize,
        total_features: usize,
    ) -> Result<Self> {
        let average_accuracy = confusion
            .macro_accuracy()
            .ok_or_else(|| Error::InvalidPlan(alloc::format!("{descriptor}: empty test set")))?;
        Ok(Self {
            descriptor,
            per_class_accuracy: confusion.per_class_accuracy(),
            confusion,
            average_accuracy,
            config,
            hyper_params,
            kept_features,
            total_features,
        })
    }
}
