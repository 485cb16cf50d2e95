//! Multi-modal fusion encoder.
//!
//! Per record: bundle `bind(feature_id, level(value))` over its features and
//! rotate by the timestamp (`rho^t`). Per modality: bundle the rotated
//! records across timestamps. Fusion: bundle the modal vectors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::LevelEmbedding;
use crate::error::{Error, Result};
use crate::hv::rng::split_seed;
use crate::hv::{bind, bundle, permute, Codebook, HyperVector, Repr};

/// One modality's feature readings at one timestamp.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModalRecord {
    pub modality: String,
    pub t: u64,
    pub features: BTreeMap<String, f64>,
}

/// Declared modalities and their feature ids.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ModalityRegistry {
    modalities: BTreeMap<String, Vec<String>>,
}

/// Codebook key for a modality's feature id.
pub fn feature_key(modality: &str, feature: &str) -> String {
    format!("{modality}/{feature}")
}

impl ModalityRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register<S: Into<String>>(&mut self, modality: &str, features: impl IntoIterator<Item = S>) {
        self.modalities
            .insert(modality.to_string(), features.into_iter().map(Into::into).collect());
    }

    pub fn arity(&self, modality: &str) -> Option<usize> {
        self.modalities.get(modality).map(Vec::len)
    }

    pub fn modalities(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.modalities.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Item memory holding one id vector per registered feature.
    pub fn id_codebook(&self, seed: u64, dim: usize, repr: Repr) -> Result<Codebook> {
        let keys = self
            .modalities
            .iter()
            .flat_map(|(m, fs)| fs.iter().map(move |f| feature_key(m, f)));
        Codebook::with_symbols("feature-id", seed, dim, repr, keys)
    }

    fn check(&self, r: &ModalRecord) -> Result<()> {
        let declared = self
            .modalities
            .get(&r.modality)
            .ok_or_else(|| Error::MissingItem(format!("modality {:?} not registered", r.modality)))?;
        if r.features.len() != declared.len() || declared.iter().any(|f| !r.features.contains_key(f)) {
            return Err(Error::InvalidInput(format!(
                "modality {:?} at t={} expects features {declared:?}",
                r.modality, r.t
            )));
        }
        Ok(())
    }
}

fn record_hv(r: &ModalRecord, ids: &Codebook, values: &LevelEmbedding, seed: u64) -> Result<HyperVector> {
    let pairs = r
        .features
        .iter()
        .map(|(f, v)| bind(ids.get(&feature_key(&r.modality, f))?, values.encode(*v)?))
        .collect::<Result<Vec<_>>>()?;
    let hv = if pairs.len() == 1 {
        pairs.into_iter().next().expect("one pair")
    } else {
        bundle(&pairs, split_seed(seed, "modal-features", r.t))?.binarized
    };
    Ok(permute(&hv, r.t as i64))
}

fn majority(mut vs: Vec<HyperVector>, seed: u64) -> Result<HyperVector> {
    if vs.len() == 1 {
        return Ok(vs.pop().expect("one vector"));
    }
    Ok(bundle(&vs, seed)?.binarized)
}

/// Per-modality hypervectors in registry order, for modalities present.
pub fn modal_vectors(
    records: &[ModalRecord],
    registry: &ModalityRegistry,
    ids: &Codebook,
    values: &LevelEmbedding,
    seed: u64,
) -> Result<Vec<(String, HyperVector)>> {
    if records.is_empty() {
        return Err(Error::InvalidInput("no modal records".into()));
    }
    let mut by_modality: BTreeMap<&str, BTreeMap<u64, &ModalRecord>> = BTreeMap::new();
    for r in records {
        registry.check(r)?;
        if by_modality
            .entry(&r.modality)
            .or_default()
            .insert(r.t, r)
            .is_some()
        {
            return Err(Error::InvalidInput(format!(
                "duplicate record for {:?} at t={}",
                r.modality, r.t
            )));
        }
    }
    by_modality
        .into_iter()
        .map(|(m, recs)| {
            let hvs = recs
                .values()
                .map(|r| record_hv(r, ids, values, seed))
                .collect::<Result<Vec<_>>>()?;
            Ok((m.to_string(), majority(hvs, split_seed(seed, "modal-time", 0))?))
        })
        .collect()
}

/// Fused hypervector for a set of records; output dim is the codebook's D.
pub fn multimodal_encode(
    records: &[ModalRecord],
    registry: &ModalityRegistry,
    ids: &Codebook,
    values: &LevelEmbedding,
    seed: u64,
) -> Result<HyperVector> {
    let modal = modal_vectors(records, registry, ids, values, seed)?;
    majority(
        modal.into_iter().map(|(_, hv)| hv).collect(),
        split_seed(seed, "modal-fusion", 0),
    )
}
