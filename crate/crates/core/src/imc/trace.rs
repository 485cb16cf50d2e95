//! Core mappings and operation traces.

use serde::Serialize;

use super::arch::{CoreKind, CoreSpec, Peripheries, Role};
use super::tech::TechTable;
use crate::error::{Error, Result};

/// Cores bound to one workload's pipeline stages.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mapping {
    pub workload: String,
    pub config: String,
    pub dim: usize,
    pub cores: Vec<CoreSpec>,
    pub peripheries: Peripheries,
    pub buffer_bits: u64,
    /// Static data that did not fit the provisioned capacity and is
    /// reloaded for every sample.
    pub reloaded_cores: Vec<usize>,
}

impl Mapping {
    /// Index of the `n`th core with `role`.
    pub fn core(&self, role: Role, n: usize) -> Result<usize> {
        self.cores
            .iter()
            .enumerate()
            .filter(|(_, c)| c.role == role)
            .nth(n)
            .map(|(i, _)| i)
            .ok_or_else(|| Error::Mapping(format!("no {role} core #{n} in mapping")))
    }

    pub fn count(&self, kind: CoreKind) -> usize {
        self.cores.iter().filter(|c| c.kind == kind).count()
    }

    pub fn capacity_bits(&self) -> u64 {
        self.cores.iter().map(CoreSpec::capacity_bits).sum()
    }

    /// Folds per D-wide vector access.
    pub fn folds(&self) -> u64 {
        self.peripheries.dimension_divider.max(1) as u64
    }

    /// Cell-equivalent bytes per core (bits / bits-per-cell / 8), then the
    /// buffers.
    pub fn footprint_bytes(&self, techs: &TechTable) -> Result<Vec<u64>> {
        self.cores
            .iter()
            .map(|c| {
                let bpc = techs.get(c.memory)?.bits_per_cell as u64;
                Ok(c.capacity_bits().div_ceil(bpc).div_ceil(8))
            })
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CoreActivity {
    pub core: usize,
    pub read_accesses: u64,
    pub write_accesses: u64,
    pub read_bits: u64,
    pub write_bits: u64,
    /// In-memory element operations (XOR or MAC).
    pub ops: u64,
}

/// Element operations in the adder, threshold, comparator, shifter and
/// exponent logic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LogicCounts {
    pub adds: u64,
    pub thresholds: u64,
    pub compares: u64,
    pub shifts: u64,
    pub exponent_ops: u64,
    pub exponent_buffer_bits: u64,
}

/// Vector-wide logic steps on the critical path.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LogicSteps {
    pub add: u64,
    pub threshold: u64,
    pub compare: u64,
    pub shift: u64,
    pub exponent: u64,
}

/// A step of the pipeline: cores listed run in parallel; stages follow
/// each other. `repeat` counts executions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stage {
    pub name: String,
    pub repeat: u64,
    pub cores: Vec<CoreActivity>,
    pub logic: LogicCounts,
    pub steps: LogicSteps,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CoreCounters {
    pub read_bits: u64,
    pub write_bits: u64,
    pub ops: u64,
    pub cycles: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OpTrace {
    pub workload: String,
    pub stages: Vec<Stage>,
    /// Bits written per core in the one-time programming epoch.
    pub programming_bits: Vec<u64>,
    /// Wall-clock span the cores stay allocated, in seconds.
    pub duration: f64,
    pub reprogram_events: u64,
}

impl OpTrace {
    pub fn core_counters(&self) -> Vec<CoreCounters> {
        let mut out = vec![CoreCounters::default(); self.programming_bits.len()];
        for s in &self.stages {
            for a in &s.cores {
                let c = &mut out[a.core];
                c.read_bits += s.repeat * a.read_bits;
                c.write_bits += s.repeat * a.write_bits;
                c.ops += s.repeat * a.ops;
                c.cycles += s.repeat * (a.read_accesses + a.write_accesses);
            }
        }
        out
    }

    pub fn logic_totals(&self) -> LogicCounts {
        let mut t = LogicCounts::default();
        for s in &self.stages {
            let (l, r) = (&s.logic, s.repeat);
            t.adds += r * l.adds;
            t.thresholds += r * l.thresholds;
            t.compares += r * l.compares;
            t.shifts += r * l.shifts;
            t.exponent_ops += r * l.exponent_ops;
            t.exponent_buffer_bits += r * l.exponent_buffer_bits;
        }
        t
    }
}

/// Accumulates one stage; vector accesses are multiplied by the fold count.
pub(crate) struct StageBuilder {
    stage: Stage,
    folds: u64,
}

impl StageBuilder {
    pub(crate) fn new(name: &str, repeat: u64, folds: u64) -> Self {
        StageBuilder {
            stage: Stage {
                name: name.to_string(),
                repeat,
                cores: Vec::new(),
                logic: LogicCounts::default(),
                steps: LogicSteps::default(),
            },
            folds,
        }
    }

    fn slot(&mut self, core: usize) -> &mut CoreActivity {
        if let Some(i) = self.stage.cores.iter().position(|a| a.core == core) {
            &mut self.stage.cores[i]
        } else {
            self.stage.cores.push(CoreActivity {
                core,
                ..Default::default()
            });
            self.stage.cores.last_mut().expect("pushed")
        }
    }

    /// `accesses` row-parallel reads touching `bits` cells, performing `ops`.
    pub(crate) fn read(mut self, core: usize, accesses: u64, bits: u64, ops: u64) -> Self {
        let f = self.folds;
        let a = self.slot(core);
        a.read_accesses += accesses * f;
        a.read_bits += bits;
        a.ops += ops;
        self
    }

    pub(crate) fn write(mut self, core: usize, accesses: u64, bits: u64) -> Self {
        let f = self.folds;
        let a = self.slot(core);
        a.write_accesses += accesses * f;
        a.write_bits += bits;
        self
    }

    pub(crate) fn add(mut self, n: u64) -> Self {
        self.stage.logic.adds += n;
        self.stage.steps.add += 1;
        self
    }

    pub(crate) fn threshold(mut self, n: u64) -> Self {
        self.stage.logic.thresholds += n;
        self.stage.steps.threshold += 1;
        self
    }

    pub(crate) fn shift(mut self, n: u64) -> Self {
        self.stage.logic.shifts += n;
        self.stage.steps.shift += 1;
        self
    }

    /// Winner-take-all over `candidates` in a comparator tree.
    pub(crate) fn compare(self, candidates: u64) -> Self {
        self.compare_groups(1, candidates)
    }

    /// `groups` comparator trees working side by side.
    pub(crate) fn compare_groups(mut self, groups: u64, candidates: u64) -> Self {
        if candidates > 1 {
            self.stage.logic.compares += groups * (candidates - 1);
            self.stage.steps.compare += 64 - (candidates - 1).leading_zeros() as u64;
        }
        self
    }

    /// Floating-point MACs: per MAC one exponent read, exponent add,
    /// max-reduce and shift.
    pub(crate) fn fp_macs(mut self, macs: u64, exponent_bits: u64) -> Self {
        self.stage.logic.exponent_ops += 3 * macs;
        self.stage.logic.exponent_buffer_bits += exponent_bits * macs;
        self.stage.steps.exponent += 3;
        self
    }

    pub(crate) fn build(self) -> Stage {
        self.stage
    }
}
