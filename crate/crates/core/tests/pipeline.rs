use hdgkit_core::eval::{
    ablation_study, cross_view_splits, half_subject_splits, hyperparameter_sweep, run_protocol,
    SplitPlan, SweepCell, ABLATION_COMBINATIONS,
};
use hdgkit_core::forest::{predictor_importance, train_forest, train_pipeline, FeatureMatrix};
use hdgkit_core::synth::{generate_synthetic, SynthSpec};
use hdgkit_core::{Component, ComponentSet, Error, HdgConfig, HyperParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn blobs(n: usize, dims: usize, classes: usize, seed: u64) -> (FeatureMatrix, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for i in 0..n {
        let c = i % classes;
        rows.push(
            (0..dims)
                .map(|d| if d < 2 { c as f64 * 4.0 + rng.random_range(-1.0..1.0) } else { rng.random_range(-1.0..1.0) })
                .collect::<Vec<f64>>(),
        );
        y.push(c);
    }
    (FeatureMatrix::from_rows(&rows).unwrap(), y)
}

fn quick_hp() -> HyperParams {
    HyperParams {
        pruning_trees: 24,
        classifier_trees: 24,
        alpha: 1.0,
        rng_seed: 3,
    }
}

fn small_spec(noise: f64) -> SynthSpec {
    SynthSpec {
        num_classes: 3,
        num_subjects: 4,
        num_views: 3,
        frame_height: 24,
        frame_width: 32,
        num_frames: 10,
        noise_level: noise,
        ..SynthSpec::default()
    }
}

fn small_config() -> HdgConfig {
    HdgConfig {
        grid: [4, 4, 3],
        ..HdgConfig::msr_compat()
    }
}

#[test]
fn separable_training_points_are_recovered() {
    let (x, y) = blobs(60, 6, 3, 1);
    let forest = train_forest(&x, &y, 32, 9).unwrap();
    for (r, &label) in y.iter().enumerate() {
        assert_eq!(forest.predict(x.row(r)).unwrap().label, label);
    }
}

#[test]
fn zero_alpha_keeps_everything_and_matches_plain_forest() {
    let (x, y) = blobs(80, 3, 2, 2);
    let hp = HyperParams {
        alpha: 0.0,
        ..quick_hp()
    };
    let pruner = train_forest(&x, &y, hp.pruning_trees, hp.pruning_seed()).unwrap();
    assert!(predictor_importance(&pruner).normalized().iter().all(|&v| v > 0.0));
    let pipe = train_pipeline(&x, &y, &hp).unwrap();
    assert_eq!(pipe.mask.kept_indices(), &[0, 1, 2]);
    let plain = train_forest(&x, &y, hp.classifier_trees, hp.classifier_seed()).unwrap();
    assert_eq!(pipe.classifier, plain);
}

#[test]
fn excluded_columns_do_not_affect_predictions() {
    let (x, y) = blobs(60, 12, 3, 5);
    let pipe = train_pipeline(&x, &y, &quick_hp()).unwrap();
    let kept = pipe.mask.kept_indices();
    assert!(kept.len() < 12);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for r in 0..x.rows() {
        let mut v = x.row(r).to_vec();
        let before = pipe.predict(&v).unwrap();
        for (i, val) in v.iter_mut().enumerate() {
            if !kept.contains(&i) {
                *val = rng.random_range(-100.0..100.0);
            }
        }
        assert_eq!(pipe.predict(&v).unwrap(), before);
    }
}

#[test]
fn noise_free_protocol_is_perfect_and_repeatable() {
    let spec = SynthSpec {
        frame_height: 48,
        frame_width: 64,
        num_frames: 20,
        ..small_spec(0.0)
    };
    let (manifest, samples) = generate_synthetic(&spec).unwrap();
    let plans = &half_subject_splits(&manifest).unwrap()[..2];
    let hp = quick_hp();
    let a = run_protocol(&manifest, &samples, &small_config(), &hp, plans).unwrap();
    assert_eq!(a.mean_accuracy, Some(1.0));
    let b = run_protocol(&manifest, &samples, &small_config(), &hp, plans).unwrap();
    assert_eq!(a, b);
    let report = a.reports().next().unwrap();
    assert!(report.kept_features < report.total_features);
}

#[test]
fn empty_test_set_is_rejected() {
    let (manifest, samples) = generate_synthetic(&small_spec(0.0)).unwrap();
    let plan = SplitPlan {
        descriptor: "no test".into(),
        train_ids: manifest.samples.iter().map(|s| s.sample_id.clone()).collect(),
        test_ids: vec![],
    };
    assert!(matches!(
        run_protocol(&manifest, &samples, &small_config(), &quick_hp(), &[plan]),
        Err(Error::InvalidPlan(_))
    ));
}

#[test]
fn ablation_rows_follow_table_order() {
    let spec = SynthSpec {
        num_classes: 2,
        num_subjects: 2,
        num_views: 1,
        num_frames: 10,
        frame_height: 24,
        frame_width: 32,
        ..SynthSpec::default()
    };
    let (manifest, samples) = generate_synthetic(&spec).unwrap();
    let plans = &half_subject_splits(&manifest).unwrap()[..1];
    let rows = ablation_study(&manifest, &samples, &HdgConfig::msr_compat(), &quick_hp(), plans).unwrap();
    assert_eq!(rows.len(), 10);
    for (row, combo) in rows.iter().zip(ABLATION_COMBINATIONS) {
        assert_eq!(row.components, ComponentSet::of(combo));
    }
    assert_eq!(rows[0].components, ComponentSet::of(&[Component::Hod]));
    assert_eq!(rows[9].components, ComponentSet::ALL);
    assert_eq!(rows[9].feature_len, 13250);
}

#[test]
fn skeleton_features_beat_depth_histograms_under_heavy_depth_noise() {
    let (manifest, samples) = generate_synthetic(&small_spec(400.0)).unwrap();
    let plans = cross_view_splits(&manifest).unwrap();
    let hp = quick_hp();
    let run = |components: &[Component]| {
        let cfg = small_config().with_components(ComponentSet::of(components));
        run_protocol(&manifest, &samples, &cfg, &hp, &plans)
            .unwrap()
            .mean_accuracy
            .unwrap()
    };
    let skeleton = run(&[Component::Jpd, Component::Jmv]);
    let hod = run(&[Component::Hod]);
    assert!(skeleton >= hod, "jpd+jmv {skeleton} < hod {hod}");
}

#[test]
fn sweep_marks_emptied_masks_as_failed() {
    let (manifest, samples) = generate_synthetic(&small_spec(5.0)).unwrap();
    let plans = &cross_view_splits(&manifest).unwrap()[..1];
    let cfg = small_config().with_components(ComponentSet::of(&[Component::Jpd, Component::Jmv]));
    let grid = hyperparameter_sweep(&manifest, &samples, &cfg, &quick_hp(), &[8, 16], &[0.0, 1e6], plans).unwrap();
    for ti in 0..2 {
        assert!(matches!(grid.cell(ti, 0), SweepCell::Ok { .. }));
        assert!(matches!(grid.cell(ti, 1), SweepCell::Failed { .. }));
    }
    assert_eq!(grid.best().map(|b| b.1), Some(0.0));

    let hp = HyperParams {
        pruning_trees: 16,
        alpha: 0.5,
        ..quick_hp()
    };
    let single = hyperparameter_sweep(&manifest, &samples, &cfg, &hp, &[16], &[0.5], plans).unwrap();
    let direct = run_protocol(&manifest, &samples, &cfg, &hp, plans).unwrap();
    assert_eq!(
        single.cells[0],
        SweepCell::Ok {
            mean_accuracy: direct.mean_accuracy.unwrap()
        }
    );
    assert!(matches!(
        hyperparameter_sweep(&manifest, &samples, &cfg, &hp, &[], &[0.5], plans),
        Err(Error::EmptyGrid(_))
    ));
}
