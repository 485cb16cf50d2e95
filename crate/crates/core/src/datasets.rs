//! Seeded synthetic workloads used by the CLI, the cost sweeps and the tests.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::hv::rng::keyed_rng;
use crate::io::Dataset;

/// Isotropic Gaussian blobs around random class centers at distance
/// `radius` from the origin.
pub fn gaussian_blobs(
    classes: usize,
    features: usize,
    samples_per_class: usize,
    radius: f64,
    noise_std: f64,
    seed: u64,
) -> Dataset {
    let mut rng = keyed_rng("blobs", &[], seed);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let noise = Normal::new(0.0, noise_std.max(f64::MIN_POSITIVE)).expect("noise normal");
    let centers: Vec<Vec<f64>> = (0..classes)
        .map(|_| {
            let v: Vec<f64> = (0..features).map(|_| unit.sample(&mut rng)).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
            v.iter().map(|x| x / n * radius).collect()
        })
        .collect();
    let mut rows: Vec<(Vec<f64>, String)> = Vec::with_capacity(classes * samples_per_class);
    for (c, center) in centers.iter().enumerate() {
        for _ in 0..samples_per_class {
            let x = center.iter().map(|m| m + noise.sample(&mut rng)).collect();
            rows.push((x, format!("c{c}")));
        }
    }
    rows.shuffle(&mut rng);
    Dataset {
        feature_names: (0..features).map(|i| format!("f{i}")).collect(),
        features: rows.iter().map(|r| r.0.clone()).collect(),
        labels: rows.into_iter().map(|r| r.1).collect(),
    }
}

/// Splits into (train, test) with `test_fraction` of rows held out.
pub fn train_test_split(ds: &Dataset, test_fraction: f64, seed: u64) -> (Dataset, Dataset) {
    let mut idx: Vec<usize> = (0..ds.len()).collect();
    idx.shuffle(&mut keyed_rng("split", &[], seed));
    let n_test = ((ds.len() as f64) * test_fraction).round() as usize;
    let (test, train) = idx.split_at(n_test.min(ds.len()));
    (ds.subset(train), ds.subset(test))
}

/// G(V, p) random graph over nodes `0..v`, as an edge list with `u < w`.
pub fn erdos_renyi(v: usize, p: f64, seed: u64) -> Vec<(String, String)> {
    let mut rng = keyed_rng("erdos-renyi", &[], seed);
    let mut edges = Vec::new();
    for u in 0..v {
        for w in (u + 1)..v {
            if rng.random::<f64>() < p {
                edges.push((u.to_string(), w.to_string()));
            }
        }
    }
    edges
}

/// Class-conditional layer features for OOD tests: each class has a random
/// center per layer; in-distribution samples sit near a center and
/// out-of-distribution samples are drawn around fresh random centers.
#[derive(Clone, Debug)]
pub struct LayerFeatureSet {
    pub layer_dims: Vec<usize>,
    pub train: Vec<(String, Vec<Vec<f64>>)>,
    pub in_dist: Vec<Vec<Vec<f64>>>,
    pub out_dist: Vec<Vec<Vec<f64>>>,
}

pub fn layer_features(
    layer_dims: &[usize],
    classes: usize,
    train_per_class: usize,
    eval_count: usize,
    noise_std: f64,
    seed: u64,
) -> LayerFeatureSet {
    let mut rng = keyed_rng("layer-features", &[], seed);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let noise = Normal::new(0.0, noise_std.max(f64::MIN_POSITIVE)).expect("noise normal");
    let center = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Vec<f64>> {
        layer_dims
            .iter()
            .map(|&d| (0..d).map(|_| unit.sample(rng)).collect())
            .collect()
    };
    let centers: Vec<Vec<Vec<f64>>> = (0..classes).map(|_| center(&mut rng)).collect();
    let near = |c: &[Vec<f64>], rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Vec<f64>> {
        c.iter()
            .map(|l| l.iter().map(|m| m + noise.sample(rng)).collect())
            .collect()
    };
    let mut train = Vec::new();
    for (k, c) in centers.iter().enumerate() {
        for _ in 0..train_per_class {
            train.push((format!("c{k}"), near(c, &mut rng)));
        }
    }
    let in_dist = (0..eval_count)
        .map(|i| near(&centers[i % classes], &mut rng))
        .collect();
    let out_dist = (0..eval_count)
        .map(|_| {
            let c = center(&mut rng);
            near(&c, &mut rng)
        })
        .collect();
    LayerFeatureSet {
        layer_dims: layer_dims.to_vec(),
        train,
        in_dist,
        out_dist,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blobs_are_seeded() {
        let a = gaussian_blobs(2, 4, 10, 3.0, 1.0, 1);
        assert_eq!(a, gaussian_blobs(2, 4, 10, 3.0, 1.0, 1));
        assert_ne!(a, gaussian_blobs(2, 4, 10, 3.0, 1.0, 2));
        assert_eq!(a.len(), 20);
        assert_eq!(a.classes().len(), 2);
    }

    #[test]
    fn split_partitions() {
        let a = gaussian_blobs(2, 2, 50, 3.0, 1.0, 1);
        let (tr, te) = train_test_split(&a, 0.25, 3);
        assert_eq!((tr.len(), te.len()), (75, 25));
    }

    #[test]
    fn er_edges_are_simple() {
        let e = erdos_renyi(30, 0.2, 4);
        assert!(e.iter().all(|(u, v)| u.parse::<usize>().unwrap() < v.parse::<usize>().unwrap()));
        assert!(!e.is_empty());
    }
}
