//! K-means-style clustering in Hamming space.
//!
//! Seeds are picked k-means++ style (first uniformly, then proportional to
//! squared Hamming distance to the nearest seed). Each iteration assigns
//! samples to the nearest binarized centroid and rebuilds the centroid
//! accumulators from their members. A cluster that loses every member keeps
//! its previous centroid.

use rand::Rng;

use crate::error::{Error, Result};
use crate::hv::ops::{accumulate, binarize};
use crate::hv::rng::{keyed_rng, split_seed};
use crate::hv::{hamming, HyperVector};

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterModel {
    pub k: usize,
    pub centroids: Vec<Vec<i64>>,
    pub binarized: Vec<HyperVector>,
    pub assignments: Vec<usize>,
    /// Assignment changes per iteration (diagnostic; not necessarily monotone).
    pub history: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
    seed: u64,
}

impl ClusterModel {
    /// Tie seed used when binarizing centroid `c`.
    pub fn tie_seed(&self, c: usize) -> u64 {
        centroid_tie_seed(self.seed, c)
    }

    /// Nearest centroid by Hamming distance; ties go to the lower index.
    pub fn assign(&self, q: &HyperVector) -> Result<usize> {
        nearest(&self.binarized, q)
    }
}

fn centroid_tie_seed(seed: u64, c: usize) -> u64 {
    split_seed(seed, "centroid-tie", c as u64)
}

fn nearest(centroids: &[HyperVector], q: &HyperVector) -> Result<usize> {
    let mut best = (usize::MAX, 0);
    for (c, hv) in centroids.iter().enumerate() {
        let h = hamming(q, hv)?;
        if h < best.0 {
            best = (h, c);
        }
    }
    Ok(best.1)
}

fn init_centroids(samples: &[HyperVector], k: usize, seed: u64) -> Result<Vec<HyperVector>> {
    let mut rng = keyed_rng("cluster-init", &[], seed);
    let mut chosen = vec![rng.random_range(0..samples.len())];
    let mut dist: Vec<f64> = samples
        .iter()
        .map(|s| Ok((hamming(s, &samples[chosen[0]])? as f64).powi(2)))
        .collect::<Result<_>>()?;
    while chosen.len() < k {
        let total: f64 = dist.iter().sum();
        let pick = if total == 0.0 {
            // Every sample coincides with a seed; fall back to the first unused.
            (0..samples.len()).find(|i| !chosen.contains(i)).expect("k <= n")
        } else {
            let mut r = rng.random::<f64>() * total;
            let mut idx = samples.len() - 1;
            for (i, d) in dist.iter().enumerate() {
                if r < *d {
                    idx = i;
                    break;
                }
                r -= d;
            }
            idx
        };
        chosen.push(pick);
        for (i, s) in samples.iter().enumerate() {
            let d = (hamming(s, &samples[pick])? as f64).powi(2);
            if d < dist[i] {
                dist[i] = d;
            }
        }
    }
    Ok(chosen.into_iter().map(|i| samples[i].clone()).collect())
}

/// Clusters bit hypervectors into `k` groups.
pub fn cluster(samples: &[HyperVector], k: usize, max_iters: usize, seed: u64) -> Result<ClusterModel> {
    if k == 0 || k > samples.len() {
        return Err(Error::InvalidK(format!("k = {k} with {} samples", samples.len())));
    }
    if max_iters == 0 {
        return Err(Error::InvalidHyperparameter("max_iters must be >= 1".into()));
    }
    let first = &samples[0];
    if !first.repr().is_bits() || samples.iter().any(|s| s.dim() != first.dim() || s.repr() != first.repr()) {
        return Err(Error::Shape("clustering needs bit vectors of one shape".into()));
    }
    let (dim, repr) = (first.dim(), first.repr());
    let mut binarized = init_centroids(samples, k, seed)?;
    let mut centroids = vec![vec![0i64; dim]; k];
    let mut assignments = vec![usize::MAX; samples.len()];
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        let mut changes = 0;
        for (i, s) in samples.iter().enumerate() {
            let c = nearest(&binarized, s)?;
            if c != assignments[i] {
                changes += 1;
                assignments[i] = c;
            }
        }
        history.push(changes);
        if changes == 0 {
            converged = true;
            break;
        }
        for (c, acc) in centroids.iter_mut().enumerate() {
            let members: Vec<&HyperVector> = samples
                .iter()
                .zip(&assignments)
                .filter(|(_, a)| **a == c)
                .map(|(s, _)| s)
                .collect();
            if members.is_empty() {
                continue;
            }
            acc.iter_mut().for_each(|x| *x = 0);
            for m in members {
                accumulate(acc, m, 1);
            }
            binarized[c] = binarize(acc, centroid_tie_seed(seed, c), repr)?;
        }
    }
    Ok(ClusterModel {
        k,
        centroids,
        binarized,
        assignments,
        history,
        iterations,
        converged,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hv::{bundle, inject_noise, random_hv, Repr};

    fn two_groups(n: usize, dim: usize) -> (Vec<HyperVector>, Vec<usize>) {
        let protos = [
            random_hv("p", "0", 1, dim, Repr::Binary).unwrap(),
            random_hv("p", "1", 1, dim, Repr::Binary).unwrap(),
        ];
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..n {
            let g = i % 2;
            xs.push(inject_noise(&protos[g], 0.2, i as u64).unwrap());
            ys.push(g);
        }
        (xs, ys)
    }

    #[test]
    fn k1_is_bundle() {
        let (xs, _) = two_groups(9, 500);
        let m = cluster(&xs, 1, 10, 3).unwrap();
        assert!(m.converged);
        assert_eq!(m.binarized[0], bundle(&xs, m.tie_seed(0)).unwrap().binarized);
    }

    #[test]
    fn separates_groups_deterministically() {
        let (xs, ys) = two_groups(40, 2000);
        let a = cluster(&xs, 2, 20, 5).unwrap();
        let b = cluster(&xs, 2, 20, 5).unwrap();
        assert_eq!(a, b);
        let ari = crate::learning::metrics::adjusted_rand_index(&a.assignments, &ys);
        assert_eq!(ari, 1.0);
        assert!(a.iterations <= 20);
        assert_eq!(a.history.len(), a.iterations);
    }

    #[test]
    fn invalid_k() {
        let (xs, _) = two_groups(3, 64);
        assert!(matches!(cluster(&xs, 4, 5, 0), Err(Error::InvalidK(_))));
        assert!(matches!(cluster(&xs, 0, 5, 0), Err(Error::InvalidK(_))));
    }
}
