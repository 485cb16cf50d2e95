//! Out-of-distribution scoring from multi-layer features.
//!
//! Each layer's feature vector is projected to `D` with its own sign-quantized
//! random projection; the layer vectors are combined into a descriptor `y`.
//! Class representatives bundle the training descriptors of each class, and
//! the score of a sample is its best cosine to any representative.

use serde::{Deserialize, Serialize};

use crate::encoders::{FeatureEncoder, ProjectionEncoder, Quantizer};
use crate::error::{Error, Result};
use crate::hv::rng::split_seed;
use crate::hv::{bind, bundle, rank_score, HyperVector, Metric};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum CombineOp {
    /// Bundle the layer vectors; `y` stays similar to each layer.
    #[default]
    Bundle,
    /// Bind the layer vectors.
    Bind,
}

pub const DEFAULT_OOD_THRESHOLD: f64 = 0.25;

#[derive(Clone, Debug)]
pub struct HdffDescriptor {
    projections: Vec<ProjectionEncoder>,
    combine: CombineOp,
    classes: Vec<(String, HyperVector)>,
    pub threshold: f64,
    seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HdffScore {
    pub score: f64,
    pub class: String,
    pub ood: bool,
}

impl HdffDescriptor {
    pub fn new(layer_dims: &[usize], dim: usize, seed: u64, combine: CombineOp) -> Result<Self> {
        if layer_dims.is_empty() {
            return Err(Error::InvalidInput("need at least one layer".into()));
        }
        let projections = layer_dims
            .iter()
            .enumerate()
            .map(|(i, &n)| ProjectionEncoder::new(n, dim, split_seed(seed, "hdff-layer", i as u64), Quantizer::Sign))
            .collect::<Result<_>>()?;
        Ok(HdffDescriptor {
            projections,
            combine,
            classes: Vec::new(),
            threshold: DEFAULT_OOD_THRESHOLD,
            seed,
        })
    }

    pub fn layers(&self) -> usize {
        self.projections.len()
    }

    pub fn classes(&self) -> &[(String, HyperVector)] {
        &self.classes
    }

    /// Quantized projection of each layer.
    pub fn layer_vectors(&self, layers: &[Vec<f64>]) -> Result<Vec<HyperVector>> {
        if layers.len() != self.projections.len() {
            return Err(Error::Shape(format!(
                "{} layers given, descriptor has {}",
                layers.len(),
                self.projections.len()
            )));
        }
        self.projections
            .iter()
            .zip(layers)
            .map(|(p, x)| p.encode(x))
            .collect()
    }

    /// Combined descriptor `y`.
    pub fn descriptor(&self, layers: &[Vec<f64>]) -> Result<HyperVector> {
        let hs = self.layer_vectors(layers)?;
        if hs.len() == 1 {
            return Ok(hs.into_iter().next().expect("one layer"));
        }
        match self.combine {
            CombineOp::Bundle => Ok(bundle(&hs, split_seed(self.seed, "hdff-combine", 0))?.binarized),
            CombineOp::Bind => hs[1..].iter().try_fold(hs[0].clone(), |acc, h| bind(&acc, h)),
        }
    }

    /// Builds one representative per class from labelled layer features.
    pub fn fit(&mut self, train: &[(String, Vec<Vec<f64>>)]) -> Result<()> {
        let mut labels: Vec<&String> = Vec::new();
        for (l, _) in train {
            if !labels.contains(&l) {
                labels.push(l);
            }
        }
        self.classes = labels
            .iter()
            .enumerate()
            .map(|(k, label)| {
                let ys = train
                    .iter()
                    .filter(|(l, _)| l == *label)
                    .map(|(_, x)| self.descriptor(x))
                    .collect::<Result<Vec<_>>>()?;
                let rep = if ys.len() == 1 {
                    ys[0].clone()
                } else {
                    bundle(&ys, split_seed(self.seed, "hdff-class", k as u64))?.binarized
                };
                Ok(((*label).clone(), rep))
            })
            .collect::<Result<_>>()?;
        Ok(())
    }

    pub fn score(&self, layers: &[Vec<f64>]) -> Result<HdffScore> {
        if self.classes.is_empty() {
            return Err(Error::ModelState("descriptor has no class representatives".into()));
        }
        let y = self.descriptor(layers)?;
        let mut best = (f64::MIN, 0);
        for (k, (_, rep)) in self.classes.iter().enumerate() {
            let s = rank_score(&y, rep, Metric::Cosine)?;
            if s > best.0 {
                best = (s, k);
            }
        }
        Ok(HdffScore {
            score: best.0,
            class: self.classes[best.1].0.clone(),
            ood: best.0 < self.threshold,
        })
    }
}

/// `(score, nearest class)` of a sample.
pub fn hdff_score(layer_features: &[Vec<f64>], desc: &HdffDescriptor) -> Result<(f64, String)> {
    let s = desc.score(layer_features)?;
    Ok((s.score, s.class))
}
