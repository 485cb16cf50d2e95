//! Binding workloads to cores and tracing their execution.

use super::arch::{Architecture, CoreKind, CoreSpec, Role};
use super::footprint::{Category, DatasetScale, EncodingKind, WorkloadDescriptor};
use super::trace::{Mapping, OpTrace, StageBuilder};
use super::workload::{grid_sensor_count, grid_sensor_values, RunCounts, Workload, WorkloadRun};
use crate::error::{Error, Result};
use crate::reasoning::resonator::Schedule;

/// Bits of the signed accumulator that sums `n` bipolar terms.
pub fn accumulator_bits(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize + 1
}

struct Builder<'a> {
    arch: &'a Architecture,
    dim: usize,
    cores: Vec<CoreSpec>,
}

impl Builder<'_> {
    /// Core holding `vectors` D-wide vectors of `width` bits each.
    fn core(&mut self, role: Role, kind: CoreKind, vectors: usize, width: usize) {
        let folds = self.arch.peripheries.dimension_divider;
        let n = self.cores.iter().filter(|c| c.role == role).count();
        self.cores.push(CoreSpec {
            id: format!("{}{}", role.to_string().to_lowercase(), n),
            engine: role.engine(),
            kind,
            rows: vectors.max(1) * width * folds,
            cols: self.dim.div_ceil(folds),
            memory: self.arch.memory_for(kind),
            role,
        });
    }
}

/// Roles each workload's pipeline needs.
pub fn required_roles(w: &Workload) -> Vec<Role> {
    use Role::*;
    match w {
        Workload::Classification(_) => vec![Encoding, Classification],
        Workload::Perception(_) => vec![ValueEmbedding, ItemMemory, Encoding, Classification],
        Workload::NavigationTrain(_) => vec![Sensor, ValueEmbedding, Actuator, Sap, Program],
        Workload::NavigationRecall(_) => vec![Sensor, ValueEmbedding, Actuator, Program, Cleanup],
        Workload::Factorization(_) => vec![Disentangle, Similarity, Projection],
    }
}

pub fn map_workload(w: &Workload, arch: &Architecture) -> Result<Mapping> {
    use CoreKind::*;
    use Role::*;
    w.validate()?;
    arch.validate()?;
    for role in required_roles(w) {
        if !arch.provides(role) {
            return Err(Error::Mapping(format!(
                "architecture {:?} has no {role} cores, needed by {}",
                arch.name,
                w.name()
            )));
        }
    }
    let mut b = Builder {
        arch,
        dim: w.dim(),
        cores: Vec::new(),
    };
    match w {
        Workload::Classification(p) => {
            b.core(Encoding, Static, p.features, 1);
            b.core(Classification, Static, p.classes, 1);
        }
        Workload::Perception(p) => {
            b.core(ValueEmbedding, Static, p.levels, 1);
            b.core(ItemMemory, Static, p.modalities * p.features, 1);
            // Value and id vectors of the feature being bound.
            b.core(Encoding, Dynamic, 2, 1);
            b.core(Classification, Static, p.classes, 1);
        }
        Workload::NavigationTrain(p) => {
            let s = grid_sensor_count();
            b.core(Sensor, Static, s, 1);
            b.core(ValueEmbedding, Static, grid_sensor_values(p.grid), 1);
            b.core(Actuator, Static, 1 + navigation_actions(), 1);
            // Sensor and actuator vectors plus the program accumulator.
            b.core(Sap, Dynamic, 2 + accumulator_bits(p.demos), 1);
            b.core(Program, Static, 1, 1);
        }
        Workload::NavigationRecall(p) => {
            b.core(Sensor, Static, grid_sensor_count(), 1);
            b.core(ValueEmbedding, Static, grid_sensor_values(p.grid), 1);
            b.core(Actuator, Static, 1, 1);
            b.core(Program, Static, 1, 1);
            b.core(Cleanup, Static, navigation_actions(), 1);
        }
        Workload::Factorization(p) => match p.schedule {
            Schedule::Parallel => {
                for _ in 0..p.factors {
                    b.core(Disentangle, Dynamic, p.factors - 1, 1);
                }
                for _ in 0..p.factors {
                    b.core(Similarity, Static, p.items, 1);
                }
                for _ in 0..p.factors {
                    b.core(Projection, Static, p.items, 1);
                }
            }
            Schedule::Sequential => {
                b.core(Disentangle, Dynamic, p.factors, 1);
                b.core(Similarity, Dynamic, p.items, 1);
                b.core(Projection, Dynamic, p.items, 1);
            }
        },
    }
    let mut m = Mapping {
        workload: w.name().to_string(),
        config: arch.memory.name.clone(),
        dim: w.dim(),
        cores: b.cores,
        peripheries: arch.peripheries.clone(),
        buffer_bits: (arch.buffer_lines * w.dim()) as u64,
        reloaded_cores: Vec::new(),
    };
    if let Some(cap) = arch.capacity_bits {
        apply_capacity(&mut m, arch, cap)?;
    }
    Ok(m)
}

fn navigation_actions() -> usize {
    crate::cognition::navigation::GRID_MOVES.len()
}

/// Below the required capacity the largest static cores are reloaded per
/// sample; above it the surplus becomes a spare core.
fn apply_capacity(m: &mut Mapping, arch: &Architecture, cap: u64) -> Result<()> {
    let need = m.capacity_bits();
    if cap < need {
        let mut short = need - cap;
        let mut statics: Vec<usize> = (0..m.cores.len()).filter(|&i| m.cores[i].kind == CoreKind::Static).collect();
        statics.sort_by_key(|&i| std::cmp::Reverse(m.cores[i].capacity_bits()));
        for i in statics {
            if short == 0 {
                break;
            }
            short = short.saturating_sub(m.cores[i].capacity_bits());
            m.cores[i].kind = CoreKind::Dynamic;
            m.reloaded_cores.push(i);
        }
        if short > 0 {
            return Err(Error::Mapping(format!(
                "capacity of {cap} bits cannot hold the {} bit dynamic working set",
                need - m.reloaded_cores.iter().map(|&i| m.cores[i].capacity_bits()).sum::<u64>()
            )));
        }
        m.reloaded_cores.sort_unstable();
    } else if cap > need {
        let cols = m.dim.div_ceil(m.peripheries.dimension_divider);
        m.cores.push(CoreSpec {
            id: "spare0".into(),
            engine: Role::Spare.engine(),
            kind: CoreKind::Static,
            rows: ((cap - need) as usize).div_ceil(cols),
            cols,
            memory: arch.memory_for(CoreKind::Static),
            role: Role::Spare,
        });
    }
    Ok(())
}

fn check_mapping(run: &WorkloadRun, m: &Mapping) -> Result<()> {
    if m.workload != run.workload.name() || m.dim != run.workload.dim() {
        return Err(Error::Mapping(format!(
            "mapping for {} (D={}) does not match run of {} (D={})",
            m.workload,
            m.dim,
            run.workload.name(),
            run.workload.dim()
        )));
    }
    Ok(())
}

/// Operation trace of an executed workload on a mapping.
pub fn trace_workload(run: &WorkloadRun, m: &Mapping) -> Result<OpTrace> {
    use Role::*;
    check_mapping(run, m)?;
    let d = m.dim as u64;
    let folds = m.folds();
    let st = |name: &str, repeat: u64| StageBuilder::new(name, repeat, folds);
    let p = &m.peripheries;
    let keep = if p.sparsity_scheduler { 1.0 - p.sparsity } else { 1.0 };
    let sparse = |n: u64| (n as f64 * keep).round() as u64;
    let mut stages = Vec::new();
    let mut reprogram_events = 0u64;

    match (&run.workload, &run.counts) {
        (Workload::Classification(wp), RunCounts::Classification { test_samples, .. }) => {
            let n = *test_samples as u64;
            let active = sparse(wp.features as u64);
            let (enc, cls) = (m.core(Encoding, 0)?, m.core(Classification, 0)?);
            let mut s = st("project", n).read(enc, 1, active * d, active * d).threshold(d);
            if p.fp_partitioner {
                s = s.fp_macs(active * d, 8);
            }
            stages.push(s.build());
            let c = wp.classes as u64;
            stages.push(st("classify", n).read(cls, 1, c * d, c * d).compare(c).build());
        }
        (Workload::Perception(wp), RunCounts::Perception { records, readings, .. }) => {
            let n = wp.samples as u64;
            let active = sparse(*readings);
            let (val, item, enc, cls) = (
                m.core(ValueEmbedding, 0)?,
                m.core(ItemMemory, 0)?,
                m.core(Encoding, 0)?,
                m.core(Classification, 0)?,
            );
            stages.push(st("embed", active).read(val, 1, d, 0).read(item, 1, d, 0).build());
            stages.push(st("bind", active).write(enc, 2, 2 * d).read(enc, 1, 2 * d, d).add(d).build());
            stages.push(st("record", *records).threshold(d).shift(d).add(d).build());
            stages.push(st("modality", n * wp.modalities as u64).threshold(d).add(d).build());
            stages.push(st("fuse", n).threshold(d).build());
            let c = wp.classes as u64;
            stages.push(st("classify", n).read(cls, 1, c * d, c * d).compare(c).build());
        }
        (Workload::NavigationTrain(wp), RunCounts::Navigation { demos, .. }) => {
            let n = *demos as u64;
            let s = grid_sensor_count() as u64;
            let w = accumulator_bits(wp.demos) as u64;
            let (sen, val, act, sap) = (m.core(Sensor, 0)?, m.core(ValueEmbedding, 0)?, m.core(Actuator, 0)?, m.core(Sap, 0)?);
            stages.push(st("sensor-values", n).read(val, s, s * d, 0).build());
            stages.push(st("sensor-encode", n).read(sen, 1, s * d, s * d).threshold(d).build());
            stages.push(st("actuator-encode", n).read(act, 2, 2 * d, d).build());
            stages.push(st("pair", n).write(sap, 2, 2 * d).read(sap, 1, 2 * d, d).build());
            stages.push(st("accumulate", n).read(sap, w, w * d, 0).write(sap, w, w * d).add(d).build());
            stages.push(st("program", 1).read(sap, w, w * d, 0).threshold(d).build());
        }
        (Workload::NavigationRecall(_), RunCounts::Navigation { demos, actuator_values, .. }) => {
            let n = *demos as u64;
            let s = grid_sensor_count() as u64;
            let v = *actuator_values as u64;
            let (sen, val, act, prog, cln) = (
                m.core(Sensor, 0)?,
                m.core(ValueEmbedding, 0)?,
                m.core(Actuator, 0)?,
                m.core(Program, 0)?,
                m.core(Cleanup, 0)?,
            );
            stages.push(st("sensor-values", n).read(val, s, s * d, 0).build());
            stages.push(st("sensor-encode", n).read(sen, 1, s * d, s * d).threshold(d).build());
            stages.push(st("program-bind", n).read(prog, 1, d, d).build());
            stages.push(st("unbind", n).read(act, 1, d, d).build());
            stages.push(st("cleanup", n).read(cln, 1, v * d, v * d).compare(v).build());
        }
        (Workload::Factorization(wp), RunCounts::Factorization { iterations, .. }) => {
            let q = wp.queries as u64;
            let it: u64 = iterations.iter().map(|&i| i as u64).sum();
            let (f, mi) = (wp.factors as u64, wp.items as u64);
            match wp.schedule {
                Schedule::Parallel => {
                    let dis: Vec<usize> = (0..wp.factors).map(|i| m.core(Disentangle, i)).collect::<Result<_>>()?;
                    let sim: Vec<usize> = (0..wp.factors).map(|i| m.core(Similarity, i)).collect::<Result<_>>()?;
                    let proj: Vec<usize> = (0..wp.factors).map(|i| m.core(Projection, i)).collect::<Result<_>>()?;
                    let each = |name: &str, repeat: u64, g: &dyn Fn(StageBuilder, usize) -> StageBuilder| {
                        (0..wp.factors).fold(st(name, repeat), g)
                    };
                    stages.push(each("load", q, &|s, i| s.write(dis[i], f - 1, (f - 1) * d)).build());
                    stages.push(each("unbind", it, &|s, i| s.read(dis[i], f - 1, (f - 1) * d, (f - 1) * d)).build());
                    stages.push(each("similarity", it, &|s, i| s.read(sim[i], 1, mi * d, mi * d)).build());
                    stages.push(each("projection", it, &|s, i| s.read(proj[i], 1, mi * d, mi * d)).threshold(f * d).build());
                    stages.push(each("update", it, &|s, i| s.write(dis[i], f - 1, (f - 1) * d)).build());
                    stages.push(each("decode", q, &|s, i| s.read(sim[i], 1, mi * d, mi * d)).compare_groups(f, mi).build());
                }
                Schedule::Sequential => {
                    let (dis, sim, proj) = (m.core(Disentangle, 0)?, m.core(Similarity, 0)?, m.core(Projection, 0)?);
                    let steps = it * f;
                    stages.push(st("load", q).write(dis, f, f * d).build());
                    stages.push(
                        st("reprogram", steps + q * f)
                            .write(sim, mi, mi * d)
                            .write(proj, mi, mi * d)
                            .build(),
                    );
                    reprogram_events += 2 * (steps + q * f);
                    stages.push(st("unbind", steps).read(dis, f - 1, (f - 1) * d, (f - 1) * d).build());
                    stages.push(st("similarity", steps).read(sim, 1, mi * d, mi * d).build());
                    stages.push(st("projection", steps).read(proj, 1, mi * d, mi * d).threshold(d).build());
                    stages.push(st("update", steps).write(dis, 1, d).build());
                    stages.push(st("decode", q * f).read(sim, 1, mi * d, mi * d).compare(mi).build());
                }
            }
        }
        _ => {
            return Err(Error::Mapping(format!("run counts do not belong to {}", run.workload.name())));
        }
    }

    let samples = run.samples() as u64;
    if !m.reloaded_cores.is_empty() {
        let s = m.reloaded_cores.iter().fold(st("reload", samples), |s, &i| {
            let c = &m.cores[i];
            s.write(i, c.rows as u64 / folds, c.capacity_bits())
        });
        stages.push(s.build());
        reprogram_events += samples * m.reloaded_cores.len() as u64;
    }
    stages.retain(|s| s.repeat > 0);

    let programming_bits = m
        .cores
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.kind == CoreKind::Static && c.role != Spare && !m.reloaded_cores.contains(&i) {
                c.capacity_bits()
            } else {
                0
            }
        })
        .collect();
    Ok(OpTrace {
        workload: run.workload.name().to_string(),
        stages,
        programming_bits,
        duration: run.duration(),
        reprogram_events,
    })
}

/// Footprint descriptor of a mapped workload, binary at one bit per cell.
pub fn workload_descriptor(w: &Workload) -> WorkloadDescriptor {
    let scale = |classes, features, sample_length, samples| DatasetScale {
        classes,
        features,
        sample_length,
        samples,
    };
    let (category, scale) = match w {
        Workload::Classification(p) => (Category::Classification, scale(p.classes, p.features, 1, 0)),
        Workload::Perception(p) => (
            Category::MultiModalPerception,
            scale(p.classes, p.modalities * p.features, p.levels, 0),
        ),
        Workload::NavigationTrain(p) | Workload::NavigationRecall(p) => (
            Category::RoboticReasoning,
            scale(navigation_actions(), grid_sensor_count(), grid_sensor_values(p.grid), 0),
        ),
        Workload::Factorization(p) => (Category::Factorization, scale(p.items, p.factors, 1, 0)),
    };
    WorkloadDescriptor {
        category,
        dim: w.dim(),
        bit_width: 1,
        encoding: EncodingKind::RandomProjection,
        scale,
        bits_per_cell: 1,
    }
}
