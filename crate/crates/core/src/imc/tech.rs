//! Memory technology parameters and node scaling.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BUILTIN_TABLE: &str = include_str!("../../data/tech_table.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MemoryKind {
    #[serde(rename = "SRAM")]
    Sram,
    #[serde(rename = "eDRAM")]
    Edram,
    #[serde(rename = "RRAM")]
    Rram,
    #[serde(rename = "MRAM")]
    Mram,
    #[serde(rename = "PCM")]
    Pcm,
    #[serde(rename = "FlashNAND")]
    FlashNand,
}

impl MemoryKind {
    pub const ALL: [MemoryKind; 6] = [
        MemoryKind::Sram,
        MemoryKind::Edram,
        MemoryKind::Rram,
        MemoryKind::Mram,
        MemoryKind::Pcm,
        MemoryKind::FlashNand,
    ];

    pub fn label(self) -> &'static str {
        match self {
            MemoryKind::Sram => "SRAM",
            MemoryKind::Edram => "eDRAM",
            MemoryKind::Rram => "RRAM",
            MemoryKind::Mram => "MRAM",
            MemoryKind::Pcm => "PCM",
            MemoryKind::FlashNand => "FlashNAND",
        }
    }

    pub fn is_nvm(self) -> bool {
        !matches!(self, MemoryKind::Sram | MemoryKind::Edram)
    }
}

impl fmt::Display for MemoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for MemoryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MemoryKind::ALL
            .into_iter()
            .find(|k| k.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown memory technology {s:?}")))
    }
}

/// Process node of the scaling table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TechNode {
    #[serde(rename = "22")]
    N22,
    #[serde(rename = "40_45")]
    N40_45,
    #[serde(rename = "65")]
    N65,
}

impl TechNode {
    pub const ALL: [TechNode; 3] = [TechNode::N65, TechNode::N40_45, TechNode::N22];

    pub fn nm(self) -> u32 {
        match self {
            TechNode::N22 => 22,
            TechNode::N40_45 => 40,
            TechNode::N65 => 65,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TechNode::N22 => "22",
            TechNode::N40_45 => "40_45",
            TechNode::N65 => "65",
        }
    }

    pub fn from_nm(nm: u32) -> Result<Self> {
        match nm {
            22 => Ok(TechNode::N22),
            40 | 45 => Ok(TechNode::N40_45),
            65 => Ok(TechNode::N65),
            _ => Err(Error::UnsupportedNode(format!("{nm} nm"))),
        }
    }
}

impl fmt::Display for TechNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TechNode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim_end_matches("nm") {
            "22" => Ok(TechNode::N22),
            "40" | "45" | "40_45" | "40/45" => Ok(TechNode::N40_45),
            "65" => Ok(TechNode::N65),
            _ => Err(Error::UnsupportedNode(s.to_string())),
        }
    }
}

/// Array-level parameters of one memory technology at one node. Energies
/// are joules per bit, latencies seconds per array access, `area_per_bit`
/// the mm² of one cell (holding `bits_per_cell` bits).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemoryTechnology {
    pub name: MemoryKind,
    pub node_nm: u32,
    pub read_energy_per_bit: f64,
    pub write_energy_per_bit: f64,
    pub read_latency: f64,
    pub write_latency: f64,
    pub area_per_bit: f64,
    pub standby_power_per_bit: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refresh_interval: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refresh_energy_per_bit: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retention: Option<f64>,
    pub bits_per_cell: u32,
    pub volatile: bool,
    #[serde(default)]
    pub source: String,
}

impl MemoryTechnology {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::IncompleteTable(format!("{} at {} nm: {what}", self.name, self.node_nm)));
        let values = [
            self.read_energy_per_bit,
            self.write_energy_per_bit,
            self.read_latency,
            self.write_latency,
            self.area_per_bit,
            self.standby_power_per_bit,
        ];
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return bad("parameters must be finite and non-negative");
        }
        if self.bits_per_cell == 0 {
            return bad("bits_per_cell must be >= 1");
        }
        if self.name.is_nvm() && self.write_energy_per_bit < self.read_energy_per_bit {
            return bad("non-volatile write energy below read energy");
        }
        let is_edram = self.name == MemoryKind::Edram;
        if self.refresh_interval.is_some() != is_edram {
            return bad("refresh_interval must be present exactly for eDRAM");
        }
        if is_edram {
            match (self.refresh_interval, self.refresh_energy_per_bit) {
                (Some(i), Some(e)) if i > 0.0 && e >= 0.0 => {}
                _ => return bad("eDRAM needs a positive refresh_interval and refresh_energy_per_bit"),
            }
        }
        Ok(())
    }

    /// Average refresh power per stored bit.
    pub fn refresh_power_per_bit(&self) -> f64 {
        match (self.refresh_interval, self.refresh_energy_per_bit) {
            (Some(i), Some(e)) => e / i,
            _ => 0.0,
        }
    }
}

/// Fixed per-operation costs of the adder, threshold, comparator (winner
/// take all), shifter and exponent logic, plus buffer and periphery costs.
/// Energies are per element operation; latencies per vector-wide step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogicParams {
    pub node_nm: u32,
    pub adder_energy: f64,
    pub adder_latency: f64,
    pub threshold_energy: f64,
    pub threshold_latency: f64,
    pub compare_energy: f64,
    pub compare_latency: f64,
    pub shift_energy: f64,
    pub shift_latency: f64,
    pub exponent_energy: f64,
    pub exponent_latency: f64,
    pub buffer_energy_per_bit: f64,
    pub buffer_area_per_bit: f64,
    pub buffer_standby_power_per_bit: f64,
    pub periphery_area_per_core: f64,
    pub logic_area: f64,
    #[serde(default)]
    pub source: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeFactors {
    pub energy: f64,
    pub latency: f64,
    pub area: f64,
    pub standby: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NvmExponents {
    pub read_energy: f64,
    pub write_energy: f64,
    pub read_latency: f64,
    pub write_latency: f64,
    pub area: f64,
    pub standby: f64,
}

/// Silicon scaling factors relative to 65 nm; non-volatile cell parameters
/// use `silicon^exponent`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingTable {
    pub silicon: BTreeMap<TechNode, NodeFactors>,
    pub nvm_exponent: NvmExponents,
    #[serde(default)]
    pub source: String,
}

impl ScalingTable {
    fn factors(&self, node: TechNode) -> Result<NodeFactors> {
        self.silicon
            .get(&node)
            .copied()
            .ok_or_else(|| Error::UnsupportedNode(format!("no scaling factors for {node} nm")))
    }

    /// Silicon factors taking `from` to `to`.
    fn ratio(&self, from: TechNode, to: TechNode) -> Result<NodeFactors> {
        let (a, b) = (self.factors(from)?, self.factors(to)?);
        Ok(NodeFactors {
            energy: b.energy / a.energy,
            latency: b.latency / a.latency,
            area: b.area / a.area,
            standby: b.standby / a.standby,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TechTable {
    pub schema_version: u32,
    #[serde(default)]
    pub notes: String,
    pub entries: Vec<MemoryTechnology>,
    pub logic: LogicParams,
    pub scaling: ScalingTable,
}

impl TechTable {
    /// The shipped 65 nm table.
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN_TABLE).expect("builtin technology table is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: TechTable = serde_json::from_str(text)?;
        t.validate()?;
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        for e in &self.entries {
            e.validate()?;
        }
        for node in TechNode::ALL {
            self.scaling.factors(node)?;
        }
        Ok(())
    }

    pub fn get(&self, kind: MemoryKind) -> Result<&MemoryTechnology> {
        self.entries
            .iter()
            .find(|e| e.name == kind)
            .ok_or_else(|| Error::IncompleteTable(format!("no entry for {kind}")))
    }

    pub fn node(&self) -> Result<TechNode> {
        TechNode::from_nm(self.logic.node_nm)
    }

    /// Whole table moved to `target`: every entry through [`scale_node`],
    /// logic by the silicon factors.
    pub fn at_node(&self, target: TechNode) -> Result<TechTable> {
        let r = self.scaling.ratio(self.node()?, target)?;
        let l = &self.logic;
        let logic = LogicParams {
            node_nm: target.nm(),
            adder_energy: l.adder_energy * r.energy,
            adder_latency: l.adder_latency * r.latency,
            threshold_energy: l.threshold_energy * r.energy,
            threshold_latency: l.threshold_latency * r.latency,
            compare_energy: l.compare_energy * r.energy,
            compare_latency: l.compare_latency * r.latency,
            shift_energy: l.shift_energy * r.energy,
            shift_latency: l.shift_latency * r.latency,
            exponent_energy: l.exponent_energy * r.energy,
            exponent_latency: l.exponent_latency * r.latency,
            buffer_energy_per_bit: l.buffer_energy_per_bit * r.energy,
            buffer_area_per_bit: l.buffer_area_per_bit * r.area,
            buffer_standby_power_per_bit: l.buffer_standby_power_per_bit * r.standby,
            periphery_area_per_core: l.periphery_area_per_core * r.area,
            logic_area: l.logic_area * r.area,
            source: l.source.clone(),
        };
        Ok(TechTable {
            schema_version: self.schema_version,
            notes: self.notes.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| scale_node(e, target, &self.scaling))
                .collect::<Result<_>>()?,
            logic,
            scaling: self.scaling.clone(),
        })
    }
}

/// Moves `tech` to `target`. Charge-based memories scale with the silicon
/// factors; non-volatile cells scale sub-linearly through the exponents.
pub fn scale_node(tech: &MemoryTechnology, target: TechNode, scaling: &ScalingTable) -> Result<MemoryTechnology> {
    let r = scaling.ratio(TechNode::from_nm(tech.node_nm)?, target)?;
    let x = scaling.nvm_exponent;
    let f = |silicon: f64, exp: f64| if tech.name.is_nvm() { silicon.powf(exp) } else { silicon };
    let mut out = tech.clone();
    out.node_nm = target.nm();
    out.read_energy_per_bit *= f(r.energy, x.read_energy);
    out.write_energy_per_bit *= f(r.energy, x.write_energy);
    out.read_latency *= f(r.latency, x.read_latency);
    out.write_latency *= f(r.latency, x.write_latency);
    out.area_per_bit *= f(r.area, x.area);
    out.standby_power_per_bit *= f(r.standby, x.standby);
    out.refresh_energy_per_bit = tech.refresh_energy_per_bit.map(|e| e * r.energy);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_is_complete() {
        let t = TechTable::builtin();
        for k in MemoryKind::ALL {
            let e = t.get(k).unwrap();
            assert_eq!(e.node_nm, 65);
            if k.is_nvm() {
                assert!(e.write_energy_per_bit >= e.read_energy_per_bit);
            }
        }
        assert_eq!(t.get(MemoryKind::Pcm).unwrap().bits_per_cell, 3);
    }

    #[test]
    fn invalid_entries_rejected() {
        let mut e = TechTable::builtin().get(MemoryKind::Sram).unwrap().clone();
        e.refresh_interval = Some(1e-3);
        assert!(matches!(e.validate(), Err(Error::IncompleteTable(_))));
        let mut d = TechTable::builtin().get(MemoryKind::Edram).unwrap().clone();
        d.refresh_energy_per_bit = None;
        assert!(d.validate().is_err());
        let mut r = TechTable::builtin().get(MemoryKind::Rram).unwrap().clone();
        r.write_energy_per_bit = 1e-16;
        assert!(r.validate().is_err());
        r.write_energy_per_bit = 1e-12;
        r.bits_per_cell = 0;
        assert!(r.validate().is_err());
    }

    #[test]
    fn scaling_directions() {
        let t = TechTable::builtin();
        let s = &t.scaling;
        let sram = t.get(MemoryKind::Sram).unwrap();
        let rram = t.get(MemoryKind::Rram).unwrap();
        assert_eq!(&scale_node(sram, TechNode::N65, s).unwrap(), sram);
        let s22 = scale_node(sram, TechNode::N22, s).unwrap();
        assert!(s22.read_energy_per_bit < sram.read_energy_per_bit);
        assert!(s22.write_energy_per_bit < sram.write_energy_per_bit);
        assert!(s22.read_latency < sram.read_latency);
        assert!(s22.area_per_bit < sram.area_per_bit);
        let r22 = scale_node(rram, TechNode::N22, s).unwrap();
        assert!(r22.area_per_bit / rram.area_per_bit > s22.area_per_bit / sram.area_per_bit);
        assert!(r22.area_per_bit < rram.area_per_bit);
    }

    #[test]
    fn node_parsing() {
        assert_eq!("45".parse::<TechNode>().unwrap(), TechNode::N40_45);
        assert_eq!("22nm".parse::<TechNode>().unwrap(), TechNode::N22);
        assert!(matches!("7".parse::<TechNode>(), Err(Error::UnsupportedNode(_))));
        assert_eq!("edram".parse::<MemoryKind>().unwrap(), MemoryKind::Edram);
        let mut e = TechTable::builtin().get(MemoryKind::Sram).unwrap().clone();
        e.node_nm = 28;
        assert!(matches!(scale_node(&e, TechNode::N22, &TechTable::builtin().scaling), Err(Error::UnsupportedNode(_))));
    }
}
