use vsa_core::datasets::{gaussian_blobs, train_test_split};
use vsa_core::encoders::{FeatureEncoder, ProjectionEncoder, Quantizer};
use vsa_core::hv::{HyperVector, Metric};
use vsa_core::learning::metrics::{adjusted_rand_index, auc};
use vsa_core::learning::{cluster, infer, retrain_iterative, train_single_pass, ClassifierModel};

/// Nearest class mean in raw feature space.
fn centroid_oracle(train: &vsa_core::io::Dataset, test: &vsa_core::io::Dataset) -> f64 {
    let classes = train.classes();
    let means: Vec<Vec<f64>> = classes
        .iter()
        .map(|c| {
            let rows: Vec<&Vec<f64>> = train.features.iter().zip(&train.labels).filter(|(_, l)| *l == c).map(|(x, _)| x).collect();
            (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / rows.len() as f64).collect()
        })
        .collect();
    let hits = test
        .features
        .iter()
        .zip(&test.labels)
        .filter(|(x, l)| {
            let d = |m: &Vec<f64>| m.iter().zip(x.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
            let best = (0..means.len()).min_by(|&i, &j| d(&means[i]).total_cmp(&d(&means[j]))).unwrap();
            &classes[best] == *l
        })
        .count();
    hits as f64 / test.len() as f64
}

#[test]
fn sixteen_feature_blobs_generalize() {
    for seed in 0..3u64 {
        let ds = gaussian_blobs(3, 16, 200, 3.0, 1.0, 20 + seed);
        let (tr, te) = train_test_split(&ds, 0.3, seed);
        let enc = ProjectionEncoder::new(16, 10_000, seed, Quantizer::Sign).unwrap();
        let model = train_single_pass(&tr, None, enc, Metric::Cosine, seed).unwrap();
        let acc = model.accuracy(&te).unwrap();
        let oracle = centroid_oracle(&tr, &te);
        assert!(oracle >= 0.95, "fixture too hard: {oracle}");
        assert!(acc >= 0.9, "seed {seed}: {acc} (oracle {oracle})");
    }
}

#[test]
fn retraining_does_not_lose_training_accuracy() {
    let ds = gaussian_blobs(2, 8, 150, 1.2, 1.0, 11);
    let enc = ProjectionEncoder::new(8, 4096, 3, Quantizer::Sign).unwrap();
    let mut model = train_single_pass(&ds, None, enc, Metric::Cosine, 3).unwrap();
    let before = model.accuracy(&ds).unwrap();
    let rep = retrain_iterative(&mut model, &ds, 0.5, 10).unwrap();
    assert_eq!(rep.train_accuracy.len(), 10);
    assert!(*rep.train_accuracy.last().unwrap() >= before, "{before} -> {:?}", rep.train_accuracy);
    assert!(rep.updates[0] > 0);
}

#[test]
fn metric_choice_agrees_on_easy_data() {
    let ds = gaussian_blobs(2, 8, 100, 4.0, 1.0, 12);
    let (tr, te) = train_test_split(&ds, 0.25, 12);
    for metric in [Metric::Cosine, Metric::Dot, Metric::NormalizedHamming] {
        let enc = ProjectionEncoder::new(8, 4096, 5, Quantizer::Sign).unwrap();
        let m = train_single_pass(&tr, None, enc, metric, 5).unwrap();
        assert!(m.accuracy(&te).unwrap() >= 0.95, "{metric:?}");
    }
}

#[test]
fn checkpoint_round_trip_preserves_predictions() {
    let ds = gaussian_blobs(3, 6, 60, 3.0, 1.0, 13);
    let enc = ProjectionEncoder::new(6, 2048, 7, Quantizer::Sign).unwrap();
    let mut model = train_single_pass(&ds, None, enc, Metric::Cosine, 7).unwrap();
    retrain_iterative(&mut model, &ds, 0.3, 2).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("model");
    model.save(&stem).unwrap();
    let loaded = ClassifierModel::load(&stem).unwrap();
    assert_eq!(loaded.classes(), model.classes());
    for x in &ds.features {
        assert_eq!(infer(&loaded, x).unwrap(), infer(&model, x).unwrap());
    }
}

#[test]
fn declared_class_without_samples_is_rejected() {
    let ds = gaussian_blobs(2, 4, 10, 3.0, 1.0, 1);
    let classes = vec!["c0".to_string(), "c1".to_string(), "ghost".to_string()];
    let enc = ProjectionEncoder::new(4, 256, 1, Quantizer::Sign).unwrap();
    assert!(train_single_pass(&ds, Some(&classes), enc, Metric::Cosine, 1).is_err());
}

#[test]
fn clustering_is_seeded() {
    let ds = gaussian_blobs(3, 8, 60, 5.0, 1.0, 14);
    let enc = ProjectionEncoder::new(8, 2048, 14, Quantizer::Sign).unwrap();
    let hvs: Vec<HyperVector> = ds.features.iter().map(|x| enc.encode(x).unwrap()).collect();
    let a = cluster(&hvs, 3, 50, 1).unwrap();
    let b = cluster(&hvs, 3, 50, 1).unwrap();
    assert_eq!(a, b);
    assert!(a.converged);
    assert!(adjusted_rand_index(&a.assignments, &ds.labels) >= 0.9);
    for (q, &c) in hvs.iter().zip(&a.assignments) {
        assert_eq!(a.assign(q).unwrap(), c);
    }
}

#[test]
fn metric_helpers() {
    let truth = [0, 0, 1, 1, 2, 2];
    assert_eq!(adjusted_rand_index(&[5, 5, 3, 3, 9, 9], &truth), 1.0);
    assert!(adjusted_rand_index(&[0, 1, 0, 1, 0, 1], &truth) < 0.1);
    assert_eq!(auc(&[0.9, 0.8], &[0.1, 0.2]), 1.0);
    assert_eq!(auc(&[0.5], &[0.5]), 0.5);
}
