//! Feature, sequence and multi-modal encoders.

pub mod level;
pub mod multimodal;
pub mod ngram;
pub mod projection;

use crate::error::Result;
use crate::hv::{HyperVector, Repr};

pub use level::LevelEmbedding;
pub use multimodal::{multimodal_encode, ModalRecord, ModalityRegistry};
pub use ngram::ngram_encode;
pub use projection::{ProjectionEncoder, Quantizer};

/// Maps a real feature vector to a hypervector.
pub trait FeatureEncoder {
    fn in_dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn repr(&self) -> Repr;
    fn encode(&self, features: &[f64]) -> Result<HyperVector>;
}
