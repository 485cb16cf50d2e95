//! Level (feature-value) embedding by linear bit interpolation.
//!
//! Two random endpoints `lo` and `hi` are drawn; let `S` be the positions
//! where they differ, visited in a seeded random order. Level `i` of `L`
//! is `lo` with the first `round(i * |S| / (L - 1))` positions of `S`
//! flipped, so level 0 is `lo`, level `L-1` is `hi`, and the distance
//! between two levels grows linearly with their index gap.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::hv::rng::keyed_rng;
use crate::hv::{random_hv, HyperVector, Repr};

pub const DEFAULT_LEVELS: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct LevelEmbedding {
    min: f64,
    max: f64,
    clamp: bool,
    seed: u64,
    level_hvs: Vec<HyperVector>,
}

impl LevelEmbedding {
    pub fn new(levels: usize, min: f64, max: f64, seed: u64, dim: usize, repr: Repr) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidInput(format!("need >= 2 levels, got {levels}")));
        }
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::InvalidInput(format!("bad level range [{min}, {max}]")));
        }
        if !repr.is_bits() {
            return Err(Error::InvalidInput(format!("level embedding needs bits, got {repr}")));
        }
        let lo = random_hv("level", "lo", seed, dim, repr)?;
        let hi = random_hv("level", "hi", seed, dim, repr)?;
        let mut diff: Vec<usize> = (0..dim).filter(|&d| lo.bit(d) != hi.bit(d)).collect();
        diff.shuffle(&mut keyed_rng("level-order", &[], seed));
        let mut bits: Vec<bool> = (0..dim).map(|d| lo.bit(d)).collect();
        let mut level_hvs = Vec::with_capacity(levels);
        let mut flipped = 0;
        for i in 0..levels {
            let target = ((i * diff.len()) as f64 / (levels - 1) as f64).round() as usize;
            for &d in &diff[flipped..target] {
                bits[d] = !bits[d];
            }
            flipped = target;
            level_hvs.push(HyperVector::from_bools(&bits, repr)?);
        }
        Ok(LevelEmbedding {
            min,
            max,
            clamp: true,
            seed,
            level_hvs,
        })
    }

    /// When off, out-of-range values are errors instead of being clamped.
    pub fn with_clamp(mut self, clamp: bool) -> Self {
        self.clamp = clamp;
        self
    }

    pub fn levels(&self) -> usize {
        self.level_hvs.len()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.min, self.max)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.level_hvs[0].dim()
    }

    pub fn repr(&self) -> Repr {
        self.level_hvs[0].repr()
    }

    pub fn level_hvs(&self) -> &[HyperVector] {
        &self.level_hvs
    }

    /// Quantization bin of `value`.
    pub fn bin(&self, value: f64) -> Result<usize> {
        if value.is_nan() {
            return Err(Error::InvalidInput("NaN level value".into()));
        }
        if !self.clamp && (value < self.min || value > self.max) {
            return Err(Error::InvalidInput(format!(
                "value {value} outside [{}, {}]",
                self.min, self.max
            )));
        }
        let l = self.levels();
        let t = ((value - self.min) / (self.max - self.min)).clamp(0.0, 1.0);
        Ok(((t * l as f64).floor() as usize).min(l - 1))
    }

    pub fn encode(&self, value: f64) -> Result<&HyperVector> {
        Ok(&self.level_hvs[self.bin(value)?])
    }
}
