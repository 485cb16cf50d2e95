//! Centroid classifier with perceptron-style retraining.
//!
//! Class accumulators are kept in fixed point (`ACCUM_SCALE` units per
//! bipolar vote) so fractional retraining steps stay exact integers and each
//! update pair `+s*Q` / `-s*Q` cancels exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::encoders::{FeatureEncoder, ProjectionEncoder, Quantizer};
use crate::error::{Error, Result};
use crate::hv::io::{decode_container, encode_container};
use crate::hv::ops::{accumulate, binarize};
use crate::hv::{rank_score, HyperVector, Metric};
use crate::io::{write_atomic, Dataset};

/// Fixed-point units per unit of accumulated vote.
pub const ACCUM_SCALE: i64 = 1 << 20;

pub const CHECKPOINT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifierModel {
    classes: Vec<String>,
    accum: Vec<Vec<i64>>,
    binarized: Vec<HyperVector>,
    encoder: ProjectionEncoder,
    metric: Metric,
    tie_seed: u64,
}

/// Per-epoch diagnostics of [`retrain_iterative`].
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RetrainReport {
    pub updates: Vec<usize>,
    pub train_accuracy: Vec<f64>,
}

impl ClassifierModel {
    /// Empty model over declared classes.
    pub fn new(classes: Vec<String>, encoder: ProjectionEncoder, metric: Metric, tie_seed: u64) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidInput("classifier needs at least one class".into()));
        }
        let d = encoder.out_dim();
        Ok(ClassifierModel {
            accum: vec![vec![0; d]; classes.len()],
            binarized: Vec::new(),
            classes,
            encoder,
            metric,
            tie_seed,
        })
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn dim(&self) -> usize {
        self.encoder.out_dim()
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn encoder(&self) -> &ProjectionEncoder {
        &self.encoder
    }

    pub fn is_trained(&self) -> bool {
        self.binarized.len() == self.classes.len()
    }

    /// Raw fixed-point accumulator of class `i`.
    pub fn accum_raw(&self, i: usize) -> &[i64] {
        &self.accum[i]
    }

    /// Accumulator of class `i` in vote units.
    pub fn accum(&self, i: usize) -> Vec<f64> {
        self.accum[i]
            .iter()
            .map(|&x| x as f64 / ACCUM_SCALE as f64)
            .collect()
    }

    /// Accumulator of class `i` as an integer hypervector (fixed point).
    pub fn accum_hv(&self, i: usize) -> HyperVector {
        HyperVector::from_ints_unchecked(self.accum[i].clone(), 64)
    }

    pub fn binarized(&self) -> &[HyperVector] {
        &self.binarized
    }

    fn class_index(&self, label: &str) -> Result<usize> {
        self.classes
            .iter()
            .position(|c| c == label)
            .ok_or_else(|| Error::InvalidInput(format!("label {label:?} is not a declared class")))
    }

    /// Majority-sign snapshots of the accumulators.
    pub fn refresh(&mut self) -> Result<()> {
        let repr = self.encoder.repr();
        self.binarized = self
            .accum
            .iter()
            .enumerate()
            .map(|(i, a)| binarize(a, crate::hv::rng::split_seed(self.tie_seed, "class-tie", i as u64), repr))
            .collect::<Result<_>>()?;
        Ok(())
    }

    /// Adds one encoded sample to its class with weight `units / ACCUM_SCALE`.
    pub fn add_encoded(&mut self, class: usize, q: &HyperVector, units: i64) -> Result<()> {
        if q.dim() != self.dim() {
            return Err(Error::Shape(format!("query dim {} vs model {}", q.dim(), self.dim())));
        }
        accumulate(&mut self.accum[class], q, units);
        Ok(())
    }

    /// Scores of an encoded query against every class snapshot.
    pub fn scores_encoded(&self, q: &HyperVector) -> Result<Vec<f64>> {
        if !self.is_trained() {
            return Err(Error::ModelState("classifier has not been trained".into()));
        }
        self.binarized
            .iter()
            .map(|c| rank_score(q, c, self.metric))
            .collect()
    }

    /// Best class for an encoded query; ties go to the earlier class.
    pub fn predict_encoded(&self, q: &HyperVector) -> Result<(usize, Vec<f64>)> {
        let scores = self.scores_encoded(q)?;
        let mut best = 0;
        for (i, s) in scores.iter().enumerate() {
            if *s > scores[best] {
                best = i;
            }
        }
        Ok((best, scores))
    }

    pub fn predict(&self, features: &[f64]) -> Result<String> {
        let (i, _) = self.predict_encoded(&self.encoder.encode(features)?)?;
        Ok(self.classes[i].clone())
    }

    pub fn accuracy(&self, ds: &Dataset) -> Result<f64> {
        let mut hits = 0;
        for (x, y) in ds.features.iter().zip(&ds.labels) {
            if &self.predict(x)? == y {
                hits += 1;
            }
        }
        Ok(hits as f64 / ds.len().max(1) as f64)
    }

    /// Writes `<stem>.hvc` (accumulators) and `<stem>.json` (manifest).
    pub fn save(&self, stem: &Path) -> Result<()> {
        let vectors: Vec<HyperVector> = (0..self.classes.len()).map(|i| self.accum_hv(i)).collect();
        write_atomic(
            &stem.with_extension("hvc"),
            &encode_container(&vectors, self.encoder.seed())?,
        )?;
        let manifest = Manifest {
            schema_version: CHECKPOINT_SCHEMA,
            classes: self.classes.clone(),
            dim: self.dim(),
            metric: self.metric,
            accum_scale: ACCUM_SCALE,
            tie_seed: self.tie_seed,
            encoder: EncoderSpec {
                in_dim: self.encoder.in_dim(),
                seed: self.encoder.seed(),
                quantizer: self.encoder.quantizer(),
            },
        };
        write_atomic(
            &stem.with_extension("json"),
            serde_json::to_string_pretty(&manifest)?.as_bytes(),
        )
    }

    pub fn load(stem: &Path) -> Result<Self> {
        let json_path = stem.with_extension("json");
        let text = std::fs::read_to_string(&json_path).map_err(|e| Error::io(&json_path, e))?;
        let m: Manifest = serde_json::from_str(&text)?;
        if m.schema_version != CHECKPOINT_SCHEMA || m.accum_scale != ACCUM_SCALE {
            return Err(Error::Format(format!(
                "unsupported checkpoint (schema {}, scale {})",
                m.schema_version, m.accum_scale
            )));
        }
        let hvc_path = stem.with_extension("hvc");
        let bytes = std::fs::read(&hvc_path).map_err(|e| Error::io(&hvc_path, e))?;
        let container = decode_container(&bytes)?;
        if container.vectors.len() != m.classes.len() || container.vectors[0].dim() != m.dim {
            return Err(Error::Format("checkpoint manifest and payload disagree".into()));
        }
        let encoder = ProjectionEncoder::new(m.encoder.in_dim, m.dim, m.encoder.seed, m.encoder.quantizer)?;
        let mut model = ClassifierModel::new(m.classes, encoder, m.metric, m.tie_seed)?;
        model.accum = container
            .vectors
            .iter()
            .map(|v| v.ints().map(<[i64]>::to_vec).ok_or_else(|| Error::Format("accumulator payload expected".into())))
            .collect::<Result<_>>()?;
        model.refresh()?;
        Ok(model)
    }
}

#[derive(Serialize, Deserialize)]
struct EncoderSpec {
    in_dim: usize,
    seed: u64,
    quantizer: Quantizer,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    schema_version: u32,
    classes: Vec<String>,
    dim: usize,
    metric: Metric,
    accum_scale: i64,
    tie_seed: u64,
    encoder: EncoderSpec,
}

/// Sums encoded samples per class. `classes` defaults to the dataset's
/// labels in first-seen order; a declared class without samples is an error.
pub fn train_single_pass(
    ds: &Dataset,
    classes: Option<&[String]>,
    encoder: ProjectionEncoder,
    metric: Metric,
    tie_seed: u64,
) -> Result<ClassifierModel> {
    let classes = classes.map(<[String]>::to_vec).unwrap_or_else(|| ds.classes());
    let mut model = ClassifierModel::new(classes, encoder, metric, tie_seed)?;
    let mut counts = vec![0usize; model.classes.len()];
    for (x, y) in ds.features.iter().zip(&ds.labels) {
        let c = model.class_index(y)?;
        let q = model.encoder.encode(x)?;
        model.add_encoded(c, &q, ACCUM_SCALE)?;
        counts[c] += 1;
    }
    if let Some(i) = counts.iter().position(|&n| n == 0) {
        return Err(Error::DegenerateClass(format!("class {:?} has no samples", model.classes[i])));
    }
    model.refresh()?;
    Ok(model)
}

/// Fine-tunes a trained model. For each misclassified sample `Q` with true
/// class `l` and predicted class `p`: `C_l += eta(1-delta) Q` and
/// `C_p -= eta(1-delta) Q`, where `delta` is the predicted class's score
/// mapped to [0, 1]. Snapshots used for prediction refresh once per epoch.
pub fn retrain_iterative(model: &mut ClassifierModel, ds: &Dataset, eta: f64, epochs: usize) -> Result<RetrainReport> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidHyperparameter(format!("eta must be > 0, got {eta}")));
    }
    if !model.is_trained() {
        return Err(Error::ModelState("retraining needs a trained model".into()));
    }
    let encoded: Vec<(usize, HyperVector)> = ds
        .features
        .iter()
        .zip(&ds.labels)
        .map(|(x, y)| Ok((model.class_index(y)?, model.encoder.encode(x)?)))
        .collect::<Result<_>>()?;
    let mut report = RetrainReport::default();
    for _ in 0..epochs {
        let mut updates = 0;
        for (truth, q) in &encoded {
            let (pred, scores) = model.predict_encoded(q)?;
            if pred == *truth {
                continue;
            }
            let delta = unit_similarity(scores[pred], model.metric, q.dim());
            let units = (eta * (1.0 - delta) * ACCUM_SCALE as f64).round() as i64;
            model.add_encoded(*truth, q, units)?;
            model.add_encoded(pred, q, -units)?;
            updates += 1;
        }
        model.refresh()?;
        let hits = encoded
            .iter()
            .map(|(t, q)| Ok((model.predict_encoded(q)?.0 == *t) as usize))
            .sum::<Result<usize>>()?;
        report.updates.push(updates);
        report.train_accuracy.push(hits as f64 / encoded.len().max(1) as f64);
    }
    Ok(report)
}

/// Maps a ranking score to [0, 1].
pub(crate) fn unit_similarity(score: f64, metric: Metric, dim: usize) -> f64 {
    match metric {
        Metric::NormalizedHamming => score,
        Metric::Cosine => (1.0 + score) / 2.0,
        Metric::Dot => (1.0 + score / dim as f64) / 2.0,
    }
    .clamp(0.0, 1.0)
}

/// Predicted label and per-class scores for a raw feature vector.
pub fn infer(model: &ClassifierModel, features: &[f64]) -> Result<(String, Vec<f64>)> {
    let (i, scores) = model.predict_encoded(&model.encoder.encode(features)?)?;
    Ok((model.classes[i].clone(), scores))
}
