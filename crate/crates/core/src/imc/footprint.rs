//! Analytic memory-footprint bounds per application category.
//!
//! A footprint counts the vectors a category's kernels keep resident:
//! encoder storage, model storage (classes, centroids, references,
//! codebooks, programs) and two working buffers, each `D * bit_width`
//! bits, packed `bits_per_cell` bits per cell. Bytes are cell bytes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    Classification,
    Clustering,
    OutlierDetection,
    Genomics,
    Factorization,
    RoboticReasoning,
    MultiModalPerception,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::Classification,
        Category::Clustering,
        Category::OutlierDetection,
        Category::Genomics,
        Category::Factorization,
        Category::RoboticReasoning,
        Category::MultiModalPerception,
    ];

    /// (smallest, largest) dataset scale of the category's reference
    /// workloads.
    pub fn scales(self) -> (DatasetScale, DatasetScale) {
        let s = |classes, features, sample_length, samples| DatasetScale {
            classes,
            features,
            sample_length,
            samples,
        };
        match self {
            // Two-class toy tasks up to spoken-letter recognition.
            Category::Classification => (s(2, 8, 1, 0), s(26, 617, 3, 0)),
            Category::Clustering => (s(2, 2, 1, 0), s(8, 8, 3, 0)),
            // Single normal class up to 10-class image features.
            Category::OutlierDetection => (s(1, 4, 1, 0), s(10, 784, 3, 0)),
            // Alphabet of 4 bases; references stored as D-wide chunks.
            Category::Genomics => (s(1, 4, 1, 4), s(1, 4, 8, 200_000)),
            // classes = items per codebook, features = factors.
            Category::Factorization => (s(4, 2, 1, 0), s(256, 4, 1, 0)),
            // classes = actuator values, features = sensors.
            Category::RoboticReasoning => (s(2, 2, 1, 0), s(4, 8, 4, 0)),
            Category::MultiModalPerception => (s(2, 4, 1, 0), s(10, 96, 8, 0)),
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Category::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown category {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EncodingKind {
    /// `features x D` projection matrix.
    RandomProjection,
    /// Symbol ids (`features`) plus position or level vectors
    /// (`sample_length`).
    NGram,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetScale {
    pub classes: usize,
    pub features: usize,
    pub sample_length: usize,
    /// Stored samples (reference chunks for genomics).
    pub samples: usize,
}

impl DatasetScale {
    fn min(self, o: DatasetScale) -> DatasetScale {
        DatasetScale {
            classes: self.classes.min(o.classes),
            features: self.features.min(o.features),
            sample_length: self.sample_length.min(o.sample_length),
            samples: self.samples.min(o.samples),
        }
    }

    fn max(self, o: DatasetScale) -> DatasetScale {
        DatasetScale {
            classes: self.classes.max(o.classes),
            features: self.features.max(o.features),
            sample_length: self.sample_length.max(o.sample_length),
            samples: self.samples.max(o.samples),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkloadDescriptor {
    pub category: Category,
    pub dim: usize,
    pub bit_width: u32,
    pub encoding: EncodingKind,
    pub scale: DatasetScale,
    pub bits_per_cell: u32,
}

impl WorkloadDescriptor {
    /// The category's smallest reference workload, binary, at `dim`.
    pub fn reference(category: Category, dim: usize) -> Self {
        WorkloadDescriptor {
            category,
            dim,
            bit_width: 1,
            encoding: EncodingKind::RandomProjection,
            scale: category.scales().0,
            bits_per_cell: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidDescriptor("D must be >= 1".into()));
        }
        if !matches!(self.bit_width, 1 | 4) {
            return Err(Error::InvalidDescriptor(format!("bit width {} not in {{1, 4}}", self.bit_width)));
        }
        if !matches!(self.bits_per_cell, 1 | 3) {
            return Err(Error::InvalidDescriptor(format!(
                "bits per cell {} not in {{1, 3}}",
                self.bits_per_cell
            )));
        }
        Ok(())
    }
}

const BUFFER_VECTORS: u64 = 2;

/// Resident vectors of a descriptor.
pub fn resident_vectors(wd: &WorkloadDescriptor) -> u64 {
    let s = &wd.scale;
    let (c, f, l, n) = (s.classes as u64, s.features as u64, s.sample_length as u64, s.samples as u64);
    let encoder = match wd.encoding {
        EncodingKind::RandomProjection => f,
        EncodingKind::NGram => f + l,
    };
    let model = match wd.category {
        Category::Classification | Category::Clustering | Category::OutlierDetection | Category::MultiModalPerception => c,
        Category::Genomics => n,
        // Codebooks and one estimate per factor; no feature encoder.
        Category::Factorization => return f * c + f + BUFFER_VECTORS,
        // Actuator values and the program.
        Category::RoboticReasoning => c + 1,
    };
    encoder + model + BUFFER_VECTORS
}

pub fn footprint_bytes(wd: &WorkloadDescriptor) -> Result<u64> {
    wd.validate()?;
    let bits = resident_vectors(wd) * wd.dim as u64 * wd.bit_width as u64;
    Ok(bits.div_ceil(wd.bits_per_cell as u64).div_ceil(8))
}

/// `(lower, upper)` bytes at the descriptor's D. The lower bound is binary,
/// random projection, 3 bits per cell over the smallest scale; the upper
/// bound 4-bit, n-gram, 1 bit per cell over the largest. The descriptor's
/// own scale widens the range.
pub fn footprint_bounds(wd: &WorkloadDescriptor) -> Result<(u64, u64)> {
    wd.validate()?;
    let (small, large) = wd.category.scales();
    let lower = WorkloadDescriptor {
        bit_width: 1,
        encoding: EncodingKind::RandomProjection,
        scale: small.min(wd.scale),
        bits_per_cell: 3,
        ..*wd
    };
    let upper = WorkloadDescriptor {
        bit_width: 4,
        encoding: EncodingKind::NGram,
        scale: large.max(wd.scale),
        bits_per_cell: 1,
        ..*wd
    };
    Ok((footprint_bytes(&lower)?, footprint_bytes(&upper)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_bracket_the_descriptor() {
        for c in Category::ALL {
            let wd = WorkloadDescriptor::reference(c, 10_000);
            let (lo, hi) = footprint_bounds(&wd).unwrap();
            let own = footprint_bytes(&wd).unwrap();
            assert!(lo <= own && own <= hi, "{c}: {lo} {own} {hi}");
        }
    }

    #[test]
    fn binary_vector_is_d_over_8_bytes() {
        let wd = WorkloadDescriptor {
            category: Category::Clustering,
            dim: 8000,
            bit_width: 1,
            encoding: EncodingKind::RandomProjection,
            scale: DatasetScale {
                classes: 0,
                features: 0,
                sample_length: 0,
                samples: 0,
            },
            bits_per_cell: 1,
        };
        // Only the two buffers remain.
        assert_eq!(footprint_bytes(&wd).unwrap(), 2000);
        let packed = WorkloadDescriptor { bits_per_cell: 3, ..wd };
        assert_eq!(footprint_bytes(&packed).unwrap(), 667);
    }

    #[test]
    fn invalid_descriptors() {
        let ok = WorkloadDescriptor::reference(Category::Genomics, 1000);
        for bad in [
            WorkloadDescriptor { bit_width: 2, ..ok },
            WorkloadDescriptor { bits_per_cell: 2, ..ok },
            WorkloadDescriptor { dim: 0, ..ok },
        ] {
            assert!(matches!(footprint_bounds(&bad), Err(Error::InvalidDescriptor(_))));
        }
    }
}
