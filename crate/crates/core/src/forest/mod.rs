//! Random decision forests with Gini splits, impurity-based predictor importance, and
//! the two-stage prune-then-classify pipeline.
//!
//! Every tree draws its randomness from its own ChaCha stream keyed by
//! `(seed, tree_index)`, so a forest is identical however its trees are scheduled.

mod importance;
mod matrix;
mod pipeline;
mod tree;

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use importance::{predictor_importance, prune_features, FeatureMask, ImportanceVector};
pub use matrix::FeatureMatrix;
pub use pipeline::{train_pipeline, TrainedPipeline};
pub use tree::{DecisionTree, Node};

use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Forest {
    trees: Vec<DecisionTree>,
    num_classes: usize,
    num_features: usize,
}

/// Predicted class and the normalized vote mass per class.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: usize,
    pub votes: Vec<f64>,
}

impl Forest {
    pub fn from_trees(trees: Vec<DecisionTree>, num_classes: usize, num_features: usize) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::InvalidConfig("forest needs at least one tree".into()));
        }
        for t in &trees {
            if t.num_classes() != num_classes {
                return Err(Error::ShapeMismatch {
                    expected: num_classes,
                    actual: t.num_classes(),
                });
            }
            if let Some(f) = t.split_features().find(|&f| f >= num_features) {
                return Err(Error::ShapeMismatch {
                    expected: num_features,
                    actual: f + 1,
                });
            }
        }
        Ok(Self {
            trees,
            num_classes,
            num_features,
        })
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn num_features(&self) -> usize {
        self.num_features
    }

    /// Leaf class counts summed over all trees.
    pub fn votes(&self, x: &[f64]) -> Result<Vec<u64>> {
        if x.len() != self.num_features {
            return Err(Error::ShapeMismatch {
                expected: self.num_features,
                actual: x.len(),
            });
        }
        let mut votes = vec![0u64; self.num_classes];
        for t in &self.trees {
            for (v, &c) in votes.iter_mut().zip(t.leaf_counts(x)) {
                *v += c as u64;
            }
        }
        Ok(votes)
    }

    /// Arg-max of the summed leaf histograms; ties go to the lowest class index.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        if let Some(col) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: 0, col });
        }
        let votes = self.votes(x)?;
        let mut label = 0;
        for (c, &v) in votes.iter().enumerate() {
            if v > votes[label] {
                label = c;
            }
        }
        let total: u64 = votes.iter().sum();
        let votes = votes
            .iter()
            .map(|&v| if total == 0 { 0.0 } else { v as f64 / total as f64 })
            .collect();
        Ok(Prediction { label, votes })
    }
}

/// Trains `trees` Gini trees, each on a same-size bootstrap of the rows, sampling
/// `floor(sqrt(num_features))` candidate features per split and growing until nodes are
/// pure or hold fewer than 2 rows.
pub fn train_forest(x: &FeatureMatrix, y: &[usize], trees: usize, seed: u64) -> Result<Forest> {
    if x.rows() != y.len() {
        return Err(Error::ShapeMismatch {
            expected: x.rows(),
            actual: y.len(),
        });
    }
    if y.len() < 2 {
        return Err(Error::TooFewRows(y.len()));
    }
    if trees == 0 {
        return Err(Error::InvalidConfig("forest needs at least one tree".into()));
    }
    if x.cols() == 0 {
        return Err(Error::InvalidConfig("feature matrix has no columns".into()));
    }
    let first = y[0];
    if y.iter().all(|&l| l == first) {
        return Err(Error::SingleClass);
    }
    x.check_finite()?;
    let num_classes = y.iter().max().unwrap() + 1;

    let built = par::map_range(trees, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let mut builder = tree::TreeBuilder::new(x, y, num_classes, rng);
        let n = y.len();
        let mut rows: Vec<usize> = (0..n).map(|_| builder.rng().random_range(0..n)).collect();
        builder.build(&mut rows)
    });
    Ok(Forest {
        trees: built,
        num_classes,
        num_features: x.cols(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor() -> (FeatureMatrix, Vec<usize>) {
        let x = FeatureMatrix::from_rows(&[[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]).unwrap();
        (x, vec![0, 1, 1, 0])
    }

    #[test]
    fn xor_is_fit_exactly() {
        let (x, y) = xor();
        // With 4 rows a bootstrap often drops a point and that tree then votes against
        // it, so an 8-tree fit depends on the seed; larger forests fit for every seed.
        let forest = train_forest(&x, &y, 8, 1).unwrap();
        for r in 0..4 {
            assert_eq!(forest.predict(x.row(r)).unwrap().label, y[r], "row {r}");
        }
        for seed in 0..20 {
            let forest = train_forest(&x, &y, 128, seed).unwrap();
            for r in 0..4 {
                assert_eq!(forest.predict(x.row(r)).unwrap().label, y[r], "seed {seed} row {r}");
            }
        }
    }

    #[test]
    fn same_seed_same_structure() {
        let (x, y) = xor();
        let a = train_forest(&x, &y, 1, 11).unwrap();
        let b = train_forest(&x, &y, 1, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_class_and_bad_input_rejected() {
        let (x, _) = xor();
        assert_eq!(train_forest(&x, &[1, 1, 1, 1], 4, 0), Err(Error::SingleClass));
        let bad = FeatureMatrix::from_rows(&[[0.0], [f64::NAN]]).unwrap();
        assert!(matches!(
            train_forest(&bad, &[0, 1], 2, 0),
            Err(Error::NonFinite { row: 1, col: 0 })
        ));
        assert!(train_forest(&x, &[0, 1], 2, 0).is_err());
    }

    fn stump(left: [u32; 2], right: [u32; 2]) -> DecisionTree {
        DecisionTree::from_nodes(
            vec![
                Node::Split {
                    feature: 0,
                    threshold: 0.5,
                    left: 1,
                    right: 2,
                    impurity_decrease: 0.5,
                },
                Node::Leaf {
                    class_counts: left.to_vec(),
                },
                Node::Leaf {
                    class_counts: right.to_vec(),
                },
            ],
            2,
        )
        .unwrap()
    }

    #[test]
    fn stump_routes_right() {
        let forest = Forest::from_trees(vec![stump([3, 0], [1, 4])], 2, 1).unwrap();
        let p = forest.predict(&[0.9]).unwrap();
        assert_eq!(p.label, 1);
        assert_eq!(p.votes, [0.2, 0.8]);
        assert_eq!(forest.predict(&[0.5]).unwrap().label, 0);
    }

    #[test]
    fn ties_go_to_lowest_class() {
        let forest = Forest::from_trees(vec![stump([2, 2], [0, 1])], 2, 1).unwrap();
        assert_eq!(forest.predict(&[0.0]).unwrap().label, 0);
        let forest = Forest::from_trees(vec![stump([1, 0], [0, 1]), stump([0, 1], [1, 0])], 2, 1)
            .unwrap();
        assert_eq!(forest.predict(&[0.0]).unwrap().label, 0);
    }

    #[test]
    fn predict_length_mismatch() {
        let forest = Forest::from_trees(vec![stump([1, 0], [0, 1])], 2, 1).unwrap();
        assert!(matches!(
            forest.predict(&[0.0, 1.0]),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn leaves_account_for_every_bootstrap_row() {
        let rows: Vec<[f64; 3]> = (0..40)
            .map(|i| [i as f64, (i * 7 % 13) as f64, (i % 4) as f64])
            .collect();
        let x = FeatureMatrix::from_rows(&rows).unwrap();
        let y: Vec<usize> = (0..40).map(|i| (i * 7 % 13 > 6) as usize + (i % 4 == 0) as usize).collect();
        let forest = train_forest(&x, &y, 5, 1).unwrap();
        for t in forest.trees() {
            let total: u32 = t
                .nodes()
                .iter()
                .filter_map(|n| match n {
                    Node::Leaf { class_counts } => Some(class_counts.iter().sum::<u32>()),
                    _ => None,
                })
                .sum();
            assert_eq!(total, 40);
        }
    }
}
