use alloc::vec;
use alloc::vec::Vec;

use super::Forest;
use crate::error::{Error, Result};

/// Per-predictor importance `p` and its L2-normalized form `p_hat = p / ||p||_2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceVector {
    raw: Vec<f64>,
    normalized: Vec<f64>,
}

impl ImportanceVector {
    pub fn from_raw(raw: Vec<f64>) -> Result<Self> {
        if let Some(i) = raw.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidConfig(alloc::format!(
                "importance {i} must be finite and non-negative"
            )));
        }
        let norm = libm::sqrt(raw.iter().map(|v| v * v).sum::<f64>());
        let normalized = if norm > 0.0 {
            raw.iter().map(|v| v / norm).collect()
        } else {
            vec![0.0; raw.len()]
        };
        Ok(Self { raw, normalized })
    }

    /// Wraps an already-normalized vector, e.g. importances computed elsewhere.
    pub fn from_normalized(p_hat: Vec<f64>) -> Result<Self> {
        if let Some(i) = p_hat.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidConfig(alloc::format!(
                "importance {i} must be finite and non-negative"
            )));
        }
        Ok(Self {
            raw: p_hat.clone(),
            normalized: p_hat,
        })
    }

    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    pub fn normalized(&self) -> &[f64] {
        &self.normalized
    }

    /// Total number of predictors.
    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }
}

/// Mean Gini decrease per feature over the forest's trees, then L2-normalized.
pub fn predictor_importance(forest: &Forest) -> ImportanceVector {
    let mut acc = vec![0.0; forest.num_features()];
    for t in forest.trees() {
        t.add_importance(&mut acc);
    }
    let n = forest.trees().len() as f64;
    acc.iter_mut().for_each(|v| *v /= n);
    ImportanceVector::from_raw(acc).expect("impurity decreases are finite and non-negative")
}

/// Columns whose normalized importance strictly exceeds `theta = alpha * mean(p_hat)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureMask {
    kept_indices: Vec<usize>,
    num_features: usize,
    theta: f64,
    alpha: f64,
}

impl FeatureMask {
    /// Keeps every column.
    pub fn all(num_features: usize) -> Self {
        Self {
            kept_indices: (0..num_features).collect(),
            num_features,
            theta: f64::NEG_INFINITY,
            alpha: 0.0,
        }
    }

    pub fn kept_indices(&self) -> &[usize] {
        &self.kept_indices
    }

    pub fn num_features(&self) -> usize {
        self.num_features
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.num_features {
            return Err(Error::ShapeMismatch {
                expected: self.num_features,
                actual: x.len(),
            });
        }
        Ok(self.kept_indices.iter().map(|&i| x[i]).collect())
    }
}

pub fn prune_features(imp: &ImportanceVector, alpha: f64) -> Result<FeatureMask> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidConfig(alloc::format!(
            "alpha must be finite and >= 0, got {alpha}"
        )));
    }
    let p_hat = imp.normalized();
    if p_hat.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroImportance);
    }
    let theta = alpha * p_hat.iter().sum::<f64>() / p_hat.len() as f64;
    let kept_indices: Vec<usize> = p_hat
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > theta)
        .map(|(i, _)| i)
        .collect();
    if kept_indices.is_empty() {
        return Err(Error::EmptySelection { alpha, theta });
    }
    Ok(FeatureMask {
        kept_indices,
        num_features: p_hat.len(),
        theta,
        alpha,
    })
}
