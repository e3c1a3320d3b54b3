mod oracle;

use hdgkit_core::eval::{combinations, half_subject_splits, mean_accuracy, ConfusionMatrix, EvalReport};
use hdgkit_core::features::{compute_hod, compute_hodg, compute_jpd, hod_counts, hod_counts_in_range, DepthRange};
use hdgkit_core::forest::{predictor_importance, prune_features, train_forest, FeatureMatrix, ImportanceVector};
use hdgkit_core::synth::{generate_synthetic, view_transform, SynthSpec};
use hdgkit_core::{
    ComponentSet, DatasetManifest, DepthSequence, HdgConfig, HyperParams, Joint, ManifestEntry,
    SkeletonSequence,
};
use proptest::prelude::*;

fn small_config() -> HdgConfig {
    HdgConfig {
        grid: [2, 2, 2],
        hod_bins: 4,
        hodg_bins: [3, 3, 3],
        jpd_bins: 8,
        jmv_cells: [1, 1, 2],
        components: ComponentSet::ALL,
    }
}

fn depth(t: usize, h: usize, w: usize) -> impl Strategy<Value = DepthSequence> {
    prop::collection::vec(prop_oneof![1 => Just(0u16), 4 => 500u16..3000], t * h * w)
        .prop_map(move |v| DepthSequence::new(t, h, w, v).unwrap())
}

fn block_sums_ok(values: &[f64], sizes: &[usize]) -> bool {
    let mut i = 0;
    let mut k = 0;
    while i < values.len() {
        let len = sizes[k % sizes.len()];
        let s: f64 = values[i..i + len].iter().sum();
        if !(s == 0.0 || (s - 1.0).abs() <= 1e-9) {
            return false;
        }
        i += len;
        k += 1;
    }
    true
}

proptest! {
    #[test]
    fn histograms_are_l1_normalized(d in depth(4, 6, 6), pts in prop::collection::vec(-1.0f64..1.0, 4 * 5 * 3)) {
        let cfg = small_config();
        prop_assert!(block_sums_ok(&compute_hod(&d, &cfg), &[cfg.hod_bins]));
        prop_assert!(block_sums_ok(&compute_hodg(&d, &cfg), &cfg.hodg_bins));
        let joints = pts.chunks(3).map(|c| Joint::new(c[0], c[1], c[2], 1.0)).collect();
        let skel = SkeletonSequence::new(4, 5, 1, joints).unwrap();
        prop_assert!(block_sums_ok(&compute_jpd(&skel, &cfg).unwrap(), &[cfg.jpd_bins]));
    }

    #[test]
    fn jpd_is_translation_invariant(
        pts in prop::collection::vec(-64i32..64, 3 * 4 * 3),
        shift in [-256i32..256, -256i32..256, -256i32..256],
    ) {
        // Dyadic coordinates keep the shifted differences exact.
        let cfg = small_config();
        let build = |offset: [f64; 3]| {
            let joints = pts
                .chunks(3)
                .map(|c| Joint::new(c[0] as f64 / 8.0 + offset[0], c[1] as f64 / 8.0 + offset[1], c[2] as f64 / 8.0 + offset[2], 1.0))
                .collect();
            SkeletonSequence::new(3, 4, 0, joints).unwrap()
        };
        let a = compute_jpd(&build([0.0; 3]), &cfg).unwrap();
        let b = compute_jpd(&build(shift.map(|s| s as f64 / 4.0)), &cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn masking_never_increases_counts(d in depth(4, 5, 5), mask in prop::collection::vec(any::<bool>(), 100)) {
        let cfg = small_config();
        let Some(range) = DepthRange::of_foreground(&d) else { return Ok(()) };
        let full = hod_counts_in_range(&d, &cfg, range);
        let masked = d.clone().with_mask(mask).unwrap();
        let part = hod_counts_in_range(&masked, &cfg, range);
        for (p, f) in part.iter().zip(&full) {
            prop_assert!(p <= f);
        }
    }

    #[test]
    fn temporal_reversal_permutes_cells(d in depth(4, 4, 4)) {
        let cfg = HdgConfig { grid: [2, 2, 2], ..small_config() };
        let (t, h, w) = (4, 4, 4);
        let mut rev = vec![0u16; t * h * w];
        for f in 0..t {
            rev[f * h * w..(f + 1) * h * w].copy_from_slice(&d.frames()[(t - 1 - f) * h * w..(t - f) * h * w]);
        }
        let rev = DepthSequence::new(t, h, w, rev).unwrap();
        let a = hod_counts(&d, &cfg);
        let b = hod_counts(&rev, &cfg);
        let bins = cfg.hod_bins;
        for ix in 0..2 {
            for iy in 0..2 {
                for it in 0..2 {
                    let cell = |i: usize| ((ix * 2 + iy) * 2 + i) * bins;
                    prop_assert_eq!(&a[cell(it)..cell(it) + bins], &b[cell(1 - it)..cell(1 - it) + bins]);
                }
            }
        }
    }

    #[test]
    fn importance_has_unit_norm(raw in prop::collection::vec(0.0f64..10.0, 1..40)) {
        prop_assume!(raw.iter().any(|&v| v > 0.0));
        let imp = ImportanceVector::from_raw(raw).unwrap();
        let norm: f64 = imp.normalized().iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn pruning_is_monotone_in_alpha(raw in prop::collection::vec(0.0f64..10.0, 2..40), a in 0.0f64..3.0, b in 0.0f64..3.0) {
        prop_assume!(raw.iter().any(|&v| v > 0.0));
        let imp = ImportanceVector::from_raw(raw).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        match (prune_features(&imp, lo), prune_features(&imp, hi)) {
            (Ok(small), Ok(big)) => {
                prop_assert!(big.kept_indices().iter().all(|i| small.kept_indices().contains(i)));
            }
            (Err(_), big) => prop_assert!(big.is_err()),
            (Ok(_), Err(_)) => {}
        }
    }

    #[test]
    fn confusion_rows_and_trace(pairs in prop::collection::vec((0usize..5, 0usize..5), 1..80)) {
        let (truth, pred): (Vec<_>, Vec<_>) = pairs.iter().cloned().unzip();
        let cm = ConfusionMatrix::from_predictions(5, &truth, &pred).unwrap();
        for c in 0..5 {
            prop_assert_eq!(cm.row_sum(c), truth.iter().filter(|&&t| t == c).count() as u64);
        }
        prop_assert_eq!(cm.trace(), pairs.iter().filter(|(t, p)| t == p).count() as u64);
    }

    #[test]
    fn mean_over_plans_ignores_order(accs in prop::collection::vec(0u32..=8, 1..10), seed in any::<u64>()) {
        let reports: Vec<EvalReport> = accs
            .iter()
            .map(|&k| {
                let cm = ConfusionMatrix::from_counts(2, vec![k as u64, 8 - k as u64, 0, 4]).unwrap();
                EvalReport::new("p".into(), cm, small_config(), HyperParams::default(), 1, 1).unwrap()
            })
            .collect();
        let mut shuffled = reports.clone();
        let n = shuffled.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = mean_accuracy(&reports).unwrap();
        let b = mean_accuracy(&shuffled).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }
}

fn subject_manifest(n: usize) -> DatasetManifest {
    DatasetManifest {
        name: "subjects".into(),
        num_classes: 1,
        num_subjects: n,
        num_views: 1,
        num_joints: 2,
        reference_joint: 0,
        samples: (0..n)
            .map(|s| ManifestEntry {
                sample_id: format!("s{s}"),
                class_label: 0,
                subject_id: s,
                view_id: 0,
                depth_path: String::new(),
                skeleton_path: String::new(),
            })
            .collect(),
    }
}

#[test]
fn half_subject_count_matches_binomial() {
    for n in 2..=12 {
        let plans = half_subject_splits(&subject_manifest(n)).unwrap();
        assert_eq!(plans.len(), oracle::binomial(n, n.div_ceil(2)), "n = {n}");
        let mut seen = std::collections::BTreeSet::new();
        for p in &plans {
            assert_eq!(p.train_ids.len(), n.div_ceil(2));
            assert!(seen.insert(p.train_ids.clone()));
        }
    }
    for n in 0..=12 {
        for k in 0..=n {
            assert_eq!(combinations(n, k).len(), oracle::binomial(n, k));
        }
    }
}

#[test]
fn views_agree_after_inverse_rotation() {
    let spec = SynthSpec {
        num_classes: 2,
        num_subjects: 2,
        num_views: 4,
        num_frames: 6,
        frame_height: 16,
        frame_width: 16,
        noise_level: 0.0,
        ..SynthSpec::default()
    };
    let (manifest, samples) = generate_synthetic(&spec).unwrap();
    for (a, ea) in samples.iter().zip(&manifest.samples) {
        for (b, eb) in samples.iter().zip(&manifest.samples) {
            if (ea.class_label, ea.subject_id) != (eb.class_label, eb.subject_id) {
                continue;
            }
            let (sa, sb) = (a.skeleton.as_ref().unwrap(), b.skeleton.as_ref().unwrap());
            let (xa, xb) = (view_transform(ea.view_id), view_transform(eb.view_id));
            for (ja, jb) in sa.joints().iter().zip(sb.joints()) {
                let pa = xa.apply_inverse([ja.x, ja.y, ja.z]);
                let pb = xb.apply_inverse([jb.x, jb.y, jb.z]);
                for k in 0..3 {
                    assert!((pa[k] - pb[k]).abs() <= 1e-9, "{} vs {}", ea.sample_id, eb.sample_id);
                }
            }
        }
    }
}

#[test]
fn synthetic_generation_is_deterministic() {
    let spec = SynthSpec {
        num_classes: 2,
        num_subjects: 2,
        num_views: 1,
        num_frames: 5,
        ..SynthSpec::default()
    };
    let (m1, s1) = generate_synthetic(&spec).unwrap();
    let (m2, s2) = generate_synthetic(&spec).unwrap();
    assert_eq!(m1, m2);
    assert_eq!(s1.len(), 4);
    for (a, b) in s1.iter().zip(&s2) {
        assert_eq!(a.depth.as_ref().unwrap().frames(), b.depth.as_ref().unwrap().frames());
        assert_eq!(a.skeleton, b.skeleton);
    }
    let quiet = SynthSpec { noise_level: 0.0, ..spec };
    let (_, q1) = generate_synthetic(&quiet).unwrap();
    let (_, q2) = generate_synthetic(&quiet).unwrap();
    for (a, b) in q1.iter().zip(&q2) {
        assert_eq!(a.skeleton, b.skeleton);
    }
}

#[test]
fn forest_importance_is_unit_norm() {
    let rows: Vec<[f64; 4]> = (0..60)
        .map(|i| [i as f64, ((i * 13) % 7) as f64, ((i * 5) % 11) as f64, 1.0])
        .collect();
    let y: Vec<usize> = (0..60).map(|i| (i >= 30) as usize + (i % 7 == 0) as usize).collect();
    let forest = train_forest(&FeatureMatrix::from_rows(&rows).unwrap(), &y, 16, 4).unwrap();
    let imp = predictor_importance(&forest);
    let norm: f64 = imp.normalized().iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!((norm - 1.0).abs() <= 1e-12);
    // the constant column never splits
    assert_eq!(imp.raw()[3], 0.0);
}
