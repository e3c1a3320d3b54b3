use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dataset::DatasetManifest;
use crate::error::{Error, Result};

/// Which samples train and which test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPlan {
    pub descriptor: String,
    pub train_ids: Vec<String>,
    pub test_ids: Vec<String>,
}

impl SplitPlan {
    pub fn validate(&self, manifest: &DatasetManifest) -> Result<()> {
        if self.train_ids.is_empty() || self.test_ids.is_empty() {
            return Err(Error::InvalidPlan(alloc::format!(
                "{}: training and test sets must both be non-empty",
                self.descriptor
            )));
        }
        let train: BTreeSet<&str> = self.train_ids.iter().map(String::as_str).collect();
        if let Some(id) = self.test_ids.iter().find(|id| train.contains(id.as_str())) {
            return Err(Error::InvalidPlan(alloc::format!(
                "{}: sample {id} is in both training and test sets",
                self.descriptor
            )));
        }
        for id in self.train_ids.iter().chain(&self.test_ids) {
            if manifest.entry(id).is_none() {
                return Err(Error::UnknownSample(id.clone()));
            }
        }
        Ok(())
    }
}

/// Every `k`-subset of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn id_set(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|v| alloc::format!("{v}")).collect();
    parts.join(",")
}

/// One plan per choice of `ceil(n/2)` training subjects, lexicographic in subject ids.
pub fn half_subject_splits(manifest: &DatasetManifest) -> Result<Vec<SplitPlan>> {
    let subjects = manifest.subjects();
    let n = subjects.len();
    if n < 2 {
        return Err(Error::TooFewSubjects(n));
    }
    let plans = combinations(n, n.div_ceil(2))
        .into_iter()
        .map(|combo| {
            let chosen: Vec<usize> = combo.iter().map(|&i| subjects[i]).collect();
            let (train, test): (Vec<_>, Vec<_>) = manifest
                .samples
                .iter()
                .partition(|s| chosen.contains(&s.subject_id));
            SplitPlan {
                descriptor: alloc::format!("subjects{{{}}}", id_set(&chosen)),
                train_ids: train.into_iter().map(|s| s.sample_id.clone()).collect(),
                test_ids: test.into_iter().map(|s| s.sample_id.clone()).collect(),
            }
        })
        .collect();
    Ok(plans)
}

/// Train on each pair of views, test on each remaining view. For four views this is the
/// 12-plan order V1V2->V3, V1V2->V4, V1V3->V2, ..., V3V4->V2.
pub fn cross_view_splits(manifest: &DatasetManifest) -> Result<Vec<SplitPlan>> {
    let v = manifest.num_views;
    if v < 3 {
        return Err(Error::TooFewViews(v));
    }
    let ids_in = |views: &[usize]| -> Vec<String> {
        manifest
            .samples
            .iter()
            .filter(|s| views.contains(&s.view_id))
            .map(|s| s.sample_id.clone())
            .collect()
    };
    let mut plans = Vec::new();
    for pair in combinations(v, 2) {
        let train_ids = ids_in(&pair);
        for test_view in (0..v).filter(|t| !pair.contains(t)) {
            plans.push(SplitPlan {
                descriptor: alloc::format!(
                    "train V{}&V{} / test V{}",
                    pair[0] + 1,
                    pair[1] + 1,
                    test_view + 1
                ),
                train_ids: train_ids.clone(),
                test_ids: ids_in(&[test_view]),
            });
        }
    }
    Ok(plans)
}

/// The plan used to tune hyperparameters: V1 & V2 -> V3 for multi-view data, otherwise
/// the first half-subject split.
pub fn validation_plan(manifest: &DatasetManifest) -> Result<SplitPlan> {
    if manifest.num_views >= 3 {
        Ok(cross_view_splits(manifest)?.remove(0))
    } else {
        Ok(half_subject_splits(manifest)?.remove(0))
    }
}
