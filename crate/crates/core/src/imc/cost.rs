//! Energy, latency, area and footprint of a trace on a mapping.

use serde::Serialize;

use super::arch::{CoreKind, Role};
use super::tech::{MemoryKind, TechTable};
use super::trace::{Mapping, OpTrace};
use crate::error::{Error, Result};

pub const COST_SCHEMA_VERSION: u32 = 1;

/// Joules by source; `total` is the sum of the other fields in field order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct EnergySplit {
    pub read: f64,
    pub write: f64,
    pub compute: f64,
    pub standby: f64,
    pub refresh: f64,
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoreFootprint {
    pub id: String,
    pub role: Role,
    pub kind: CoreKind,
    pub memory: MemoryKind,
    pub bytes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostReport {
    pub schema_version: u32,
    pub workload: String,
    pub config: String,
    pub node_nm: u32,
    pub energy: EnergySplit,
    /// Share of `energy.write` spent in the one-time programming epoch.
    pub programming_energy: f64,
    /// Critical-path compute time, seconds.
    pub latency: f64,
    /// Time the cores stay allocated: the sample span or the compute
    /// time, whichever is longer.
    pub duration: f64,
    /// mm².
    pub area: f64,
    pub edp: f64,
    pub footprint: Vec<CoreFootprint>,
    pub buffer_bytes: u64,
    pub footprint_total: u64,
    pub static_cores: usize,
    pub dynamic_cores: usize,
    pub reprogram_events: u64,
}

pub fn estimate_cost(trace: &OpTrace, m: &Mapping, techs: &TechTable) -> Result<CostReport> {
    if trace.programming_bits.len() != m.cores.len() {
        return Err(Error::Mapping(format!(
            "trace covers {} cores, mapping has {}",
            trace.programming_bits.len(),
            m.cores.len()
        )));
    }
    if !trace.duration.is_finite() || trace.duration < 0.0 {
        return Err(Error::InvalidInput(format!("trace duration {}", trace.duration)));
    }
    let techs_per_core = m.cores.iter().map(|c| techs.get(c.memory)).collect::<Result<Vec<_>>>()?;
    let logic = &techs.logic;

    let mut latency = 0.0;
    for s in &trace.stages {
        let array = s
            .cores
            .iter()
            .map(|a| {
                let t = techs_per_core[a.core];
                a.read_accesses as f64 * t.read_latency + a.write_accesses as f64 * t.write_latency
            })
            .fold(0.0, f64::max);
        let st = &s.steps;
        let periph = st.add as f64 * logic.adder_latency
            + st.threshold as f64 * logic.threshold_latency
            + st.compare as f64 * logic.compare_latency
            + st.shift as f64 * logic.shift_latency
            + st.exponent as f64 * logic.exponent_latency;
        latency += s.repeat as f64 * (array + periph);
    }
    let duration = trace.duration.max(latency);

    let counters = trace.core_counters();
    let (mut read, mut write, mut programming, mut standby, mut refresh) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, c) in m.cores.iter().enumerate() {
        let t = techs_per_core[i];
        if c.kind == CoreKind::Static && counters[i].write_bits > 0 {
            return Err(Error::Mapping(format!("static core {} written after programming", c.id)));
        }
        let bits = c.capacity_bits() as f64;
        read += counters[i].read_bits as f64 * t.read_energy_per_bit;
        let prog = trace.programming_bits[i] as f64 * t.write_energy_per_bit;
        programming += prog;
        write += counters[i].write_bits as f64 * t.write_energy_per_bit + prog;
        standby += bits * t.standby_power_per_bit * duration;
        if let (Some(interval), Some(e)) = (t.refresh_interval, t.refresh_energy_per_bit) {
            refresh += duration / interval * bits * e;
        }
    }
    standby += m.buffer_bits as f64 * logic.buffer_standby_power_per_bit * duration;
    let l = trace.logic_totals();
    let compute = l.adds as f64 * logic.adder_energy
        + l.thresholds as f64 * logic.threshold_energy
        + l.compares as f64 * logic.compare_energy
        + l.shifts as f64 * logic.shift_energy
        + l.exponent_ops as f64 * logic.exponent_energy
        + l.exponent_buffer_bits as f64 * logic.buffer_energy_per_bit;
    let total = read + write + compute + standby + refresh;

    let mut area = logic.logic_area + m.buffer_bits as f64 * logic.buffer_area_per_bit;
    for (c, t) in m.cores.iter().zip(&techs_per_core) {
        let cells = c.capacity_bits().div_ceil(t.bits_per_cell as u64);
        area += cells as f64 * t.area_per_bit + logic.periphery_area_per_core;
    }

    let bytes = m.footprint_bytes(techs)?;
    let buffer_bytes = m.buffer_bits.div_ceil(8);
    let footprint: Vec<CoreFootprint> = m
        .cores
        .iter()
        .zip(&bytes)
        .map(|(c, &b)| CoreFootprint {
            id: c.id.clone(),
            role: c.role,
            kind: c.kind,
            memory: c.memory,
            bytes: b,
        })
        .collect();
    Ok(CostReport {
        schema_version: COST_SCHEMA_VERSION,
        workload: trace.workload.clone(),
        config: m.config.clone(),
        node_nm: logic.node_nm,
        energy: EnergySplit {
            read,
            write,
            compute,
            standby,
            refresh,
            total,
        },
        programming_energy: programming,
        latency,
        duration,
        area,
        edp: total * latency,
        footprint_total: bytes.iter().sum::<u64>() + buffer_bytes,
        footprint,
        buffer_bytes,
        static_cores: m.count(CoreKind::Static),
        dynamic_cores: m.count(CoreKind::Dynamic),
        reprogram_events: trace.reprogram_events,
    })
}
