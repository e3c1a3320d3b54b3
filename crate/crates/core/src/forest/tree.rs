use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::matrix::FeatureMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Node {
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        /// Gini decrease of this split, weighted by the fraction of the tree's
        /// training rows that reach it.
        impurity_decrease: f64,
    },
    Leaf {
        class_counts: Vec<u32>,
    },
}

/// A binary classification tree stored as a flat node array; node 0 is the root.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecisionTree {
    nodes: Vec<Node>,
    num_classes: usize,
}

impl DecisionTree {
    /// Builds a tree from explicit nodes, checking child links and leaf widths.
    pub fn from_nodes(nodes: Vec<Node>, num_classes: usize) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidConfig("tree has no nodes".into()));
        }
        for (i, n) in nodes.iter().enumerate() {
            match n {
                Node::Split { left, right, .. } => {
                    if *left <= i || *right <= i || *left >= nodes.len() || *right >= nodes.len()
                    {
                        return Err(Error::InvalidConfig(alloc::format!(
                            "node {i} has invalid children ({left}, {right})"
                        )));
                    }
                }
                Node::Leaf { class_counts } => {
                    if class_counts.len() != num_classes {
                        return Err(Error::ShapeMismatch {
                            expected: num_classes,
                            actual: class_counts.len(),
                        });
                    }
                }
            }
        }
        Ok(Self { nodes, num_classes })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    /// Class counts of the leaf `x` falls into.
    pub fn leaf_counts(&self, x: &[f64]) -> &[u32] {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => i = if x[*feature] <= *threshold { *left } else { *right },
                Node::Leaf { class_counts } => return class_counts,
            }
        }
    }

    /// Every feature index that some split reads.
    pub fn split_features(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            Node::Split { feature, .. } => Some(*feature),
            Node::Leaf { .. } => None,
        })
    }

    pub(crate) fn add_importance(&self, acc: &mut [f64]) {
        for n in &self.nodes {
            if let Node::Split {
                feature,
                impurity_decrease,
                ..
            } = n
            {
                acc[*feature] += impurity_decrease;
            }
        }
    }
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    score: f64,
}

/// Grows one tree on `rows` (a bootstrap sample, duplicates allowed).
pub(crate) struct TreeBuilder<'a, R: Rng> {
    x: &'a FeatureMatrix,
    y: &'a [usize],
    num_classes: usize,
    mtry: usize,
    rng: R,
    perm: Vec<usize>,
    buf: Vec<(f64, usize)>,
    nodes: Vec<Node>,
    root_rows: f64,
}

impl<'a, R: Rng> TreeBuilder<'a, R> {
    pub(crate) fn new(x: &'a FeatureMatrix, y: &'a [usize], num_classes: usize, rng: R) -> Self {
        let mtry = isqrt(x.cols()).max(1);
        Self {
            x,
            y,
            num_classes,
            mtry,
            rng,
            perm: (0..x.cols()).collect(),
            buf: Vec::new(),
            nodes: Vec::new(),
            root_rows: 0.0,
        }
    }

    pub(crate) fn rng(&mut self) -> &mut R {
        &mut self.rng
    }

    pub(crate) fn build(mut self, rows: &mut [usize]) -> DecisionTree {
        self.root_rows = rows.len() as f64;
        self.grow(rows);
        DecisionTree {
            nodes: self.nodes,
            num_classes: self.num_classes,
        }
    }

    fn grow(&mut self, rows: &mut [usize]) -> usize {
        let mut counts = vec![0u32; self.num_classes];
        for &r in rows.iter() {
            counts[self.y[r]] += 1;
        }
        let id = self.nodes.len();
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        if pure || rows.len() < 2 {
            self.nodes.push(Node::Leaf {
                class_counts: counts,
            });
            return id;
        }
        let Some(best) = self.find_split(rows, &counts) else {
            self.nodes.push(Node::Leaf {
                class_counts: counts,
            });
            return id;
        };

        let n = rows.len() as f64;
        let sq_total: f64 = counts.iter().map(|&c| (c as f64) * (c as f64)).sum();
        let decrease = (best.score - sq_total / n) / self.root_rows;

        let mut split = 0;
        for i in 0..rows.len() {
            if self.x.get(rows[i], best.feature) <= best.threshold {
                rows.swap(i, split);
                split += 1;
            }
        }
        self.nodes.push(Node::Leaf {
            class_counts: Vec::new(),
        });
        let (l, r) = rows.split_at_mut(split);
        let left = self.grow(l);
        let right = self.grow(r);
        self.nodes[id] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
            impurity_decrease: decrease.max(0.0),
        };
        id
    }

    /// Draws features without replacement until `mtry` non-constant ones have been
    /// scored or every feature has been tried.
    fn find_split(&mut self, rows: &[usize], counts: &[u32]) -> Option<BestSplit> {
        let f_total = self.perm.len();
        let mut best: Option<BestSplit> = None;
        let mut scored = 0;
        let mut k = 0;
        while scored < self.mtry && k < f_total {
            let j = self.rng.random_range(k..f_total);
            self.perm.swap(k, j);
            let feature = self.perm[k];
            k += 1;
            if let Some((threshold, score)) = self.score_feature(rows, counts, feature) {
                scored += 1;
                if best.as_ref().is_none_or(|b| score > b.score) {
                    best = Some(BestSplit {
                        feature,
                        threshold,
                        score,
                    });
                }
            }
        }
        best
    }

    /// Best threshold on one feature, scored as `sum(c_l^2)/n_l + sum(c_r^2)/n_r`
    /// (larger means lower weighted Gini impurity). `None` when the feature is constant.
    fn score_feature(&mut self, rows: &[usize], counts: &[u32], feature: usize) -> Option<(f64, f64)> {
        self.buf.clear();
        self.buf
            .extend(rows.iter().map(|&r| (self.x.get(r, feature), self.y[r])));
        self.buf.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let n = self.buf.len();
        if self.buf[0].0 == self.buf[n - 1].0 {
            return None;
        }
        let mut left = vec![0u32; self.num_classes];
        let mut right = counts.to_vec();
        let mut sq_left = 0.0f64;
        let mut sq_right: f64 = counts.iter().map(|&c| (c as f64) * (c as f64)).sum();
        let mut best: Option<(usize, f64)> = None;
        for i in 0..n - 1 {
            let c = self.buf[i].1;
            sq_left += 2.0 * left[c] as f64 + 1.0;
            left[c] += 1;
            sq_right -= 2.0 * right[c] as f64 - 1.0;
            right[c] -= 1;
            if self.buf[i].0 < self.buf[i + 1].0 {
                let nl = (i + 1) as f64;
                let score = sq_left / nl + sq_right / (n as f64 - nl);
                if best.is_none_or(|(_, s)| score > s) {
                    best = Some((i, score));
                }
            }
        }
        best.map(|(i, score)| {
            let (lo, hi) = (self.buf[i].0, self.buf[i + 1].0);
            let mid = lo + (hi - lo) / 2.0;
            (if mid < hi { mid } else { lo }, score)
        })
    }
}

fn isqrt(n: usize) -> usize {
    let mut r = libm::sqrt(n as f64) as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_sqrt() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(1), 1);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert_eq!(isqrt(13250), 115);
    }

    #[test]
    fn rejects_dangling_children() {
        let nodes = vec![Node::Split {
            feature: 0,
            threshold: 0.0,
            left: 1,
            right: 2,
            impurity_decrease: 0.0,
        }];
        assert!(DecisionTree::from_nodes(nodes, 2).is_err());
    }
}
