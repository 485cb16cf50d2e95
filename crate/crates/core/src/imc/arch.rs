//! Architecture template: encoding and similarity-check engines built from
//! static and dynamic in-memory cores plus reconfigurable peripheries.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::tech::MemoryKind;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Engine {
    Encoding,
    SimilarityCheck,
}

/// Static cores are programmed once; dynamic cores are rewritten as their
/// operands change.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoreKind {
    Static,
    Dynamic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    ItemMemory,
    ValueEmbedding,
    Encoding,
    Classification,
    Sensor,
    Actuator,
    Sap,
    Program,
    Cleanup,
    Disentangle,
    Similarity,
    Projection,
    /// Provisioned capacity beyond what the mapping stores.
    Spare,
}

impl Role {
    pub fn engine(self) -> Engine {
        match self {
            Role::Classification | Role::Cleanup | Role::Similarity | Role::Projection => Engine::SimilarityCheck,
            _ => Engine::Encoding,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One mapped core. Capacity is `rows * cols` bits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoreSpec {
    pub id: String,
    pub engine: Engine,
    pub kind: CoreKind,
    pub rows: usize,
    pub cols: usize,
    pub memory: MemoryKind,
    pub role: Role,
}

impl CoreSpec {
    pub fn capacity_bits(&self) -> u64 {
        self.rows as u64 * self.cols as u64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Peripheries {
    pub sparsity_scheduler: bool,
    /// Fraction of zero-valued encoding operations skipped when the
    /// scheduler is on.
    pub sparsity: f64,
    pub fp_partitioner: bool,
    /// Each D-wide vector is folded into this many row segments.
    pub dimension_divider: usize,
}

impl Default for Peripheries {
    fn default() -> Self {
        Peripheries {
            sparsity_scheduler: false,
            sparsity: 0.0,
            fp_partitioner: false,
            dimension_divider: 1,
        }
    }
}

/// Memory assignment of a configuration: one technology for static cores,
/// one for dynamic cores.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryConfig {
    pub name: String,
    pub static_memory: MemoryKind,
    pub dynamic_memory: MemoryKind,
}

impl MemoryConfig {
    pub fn homogeneous(kind: MemoryKind) -> Self {
        MemoryConfig {
            name: kind.label().to_string(),
            static_memory: kind,
            dynamic_memory: kind,
        }
    }

    pub fn heterogeneous(static_memory: MemoryKind, dynamic_memory: MemoryKind) -> Self {
        MemoryConfig {
            name: format!("{static_memory}/{dynamic_memory}"),
            static_memory,
            dynamic_memory,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.static_memory == self.dynamic_memory
    }

    /// Parses `"SRAM"` or `"MRAM/SRAM"` (static/dynamic).
    pub fn parse(s: &str) -> Result<Self> {
        match s.split_once('/') {
            Some((a, b)) => Ok(Self::heterogeneous(a.trim().parse()?, b.trim().parse()?)),
            None => Ok(Self::homogeneous(s.trim().parse()?)),
        }
    }
}

/// The memory benchmark set: four homogeneous configurations and two
/// heterogeneous ones with non-volatile static and SRAM dynamic cores.
pub fn benchmark_configs() -> Vec<MemoryConfig> {
    use MemoryKind::*;
    vec![
        MemoryConfig::homogeneous(Sram),
        MemoryConfig::homogeneous(Edram),
        MemoryConfig::homogeneous(Rram),
        MemoryConfig::homogeneous(Mram),
        MemoryConfig::heterogeneous(Mram, Sram),
        MemoryConfig::heterogeneous(Rram, Sram),
    ]
}

/// SRAM alone, non-volatile alone and the hybrid, for node scaling.
pub fn node_configs() -> Vec<MemoryConfig> {
    use MemoryKind::*;
    vec![
        MemoryConfig::homogeneous(Sram),
        MemoryConfig::homogeneous(Mram),
        MemoryConfig::heterogeneous(Mram, Sram),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Architecture {
    pub name: String,
    pub memory: MemoryConfig,
    /// Role tags the hardware provides; `None` is the full template.
    pub roles: Option<Vec<Role>>,
    pub peripheries: Peripheries,
    /// Buffer lines of D elements (double-buffered by default).
    pub buffer_lines: usize,
    /// Total core capacity in bits; `None` sizes cores to the mapping.
    pub capacity_bits: Option<u64>,
}

impl Default for Architecture {
    fn default() -> Self {
        Architecture::template(MemoryConfig::homogeneous(MemoryKind::Sram))
    }
}

impl Architecture {
    pub fn template(memory: MemoryConfig) -> Self {
        Architecture {
            name: memory.name.clone(),
            memory,
            roles: None,
            peripheries: Peripheries::default(),
            buffer_lines: 2,
            capacity_bits: None,
        }
    }

    pub fn provides(&self, role: Role) -> bool {
        self.roles.as_ref().is_none_or(|r| r.contains(&role))
    }

    pub fn memory_for(&self, kind: CoreKind) -> MemoryKind {
        match kind {
            CoreKind::Static => self.memory.static_memory,
            CoreKind::Dynamic => self.memory.dynamic_memory,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.peripheries;
        if p.dimension_divider == 0 {
            return Err(Error::Config("dimension_divider must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&p.sparsity) {
            return Err(Error::Config(format!("sparsity {} must lie in [0, 1)", p.sparsity)));
        }
        Ok(())
    }
}
