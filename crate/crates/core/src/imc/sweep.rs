//! Memory-technology and node sweeps.

use rayon::prelude::*;
use serde::Serialize;

use super::arch::{Architecture, MemoryConfig};
use super::cost::{estimate_cost, CostReport};
use super::mapping::{map_workload, trace_workload};
use super::tech::{MemoryKind, TechNode, TechTable};
use super::workload::{run_workload, FactorizationParams, NavigationParams, PerceptionParams, Workload, WorkloadRun};
use crate::error::{Error, Result};

pub const SWEEP_SCHEMA_VERSION: u32 = 1;

/// Perception, navigation training and parallel factorization at their
/// default sizes.
pub fn benchmark_workloads(dim: usize) -> Vec<Workload> {
    vec![
        Workload::Perception(PerceptionParams {
            dim,
            ..Default::default()
        }),
        Workload::NavigationTrain(NavigationParams {
            dim,
            ..Default::default()
        }),
        Workload::Factorization(FactorizationParams {
            dim,
            ..Default::default()
        }),
    ]
}

/// Map, trace and cost one run on one architecture.
pub fn estimate(run: &WorkloadRun, arch: &Architecture, techs: &TechTable) -> Result<CostReport> {
    let m = map_workload(&run.workload, arch)?;
    let t = trace_workload(run, &m)?;
    estimate_cost(&t, &m, techs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub workload: String,
    pub config: String,
    pub node: String,
    pub energy: f64,
    pub latency: f64,
    pub area: f64,
    pub edp: f64,
    pub norm_energy: f64,
    pub norm_latency: f64,
    pub norm_area: f64,
    pub norm_edp: f64,
    pub read_energy: f64,
    pub write_energy: f64,
    pub compute_energy: f64,
    pub standby_energy: f64,
    pub refresh_energy: f64,
    pub footprint_bytes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    /// Configuration (and node) every row is normalized to.
    pub baseline: String,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn row(&self, workload: &str, config: &str, node: &str) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.workload == workload && r.config == config && r.node == node)
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        let mut v = serde_json::to_vec_pretty(self)?;
        v.push(b'\n');
        Ok(v)
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.into_inner().map_err(|e| Error::Format(format!("csv flush: {e}")))
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn row(r: &CostReport, node: TechNode, base: &CostReport) -> SweepRow {
    SweepRow {
        workload: r.workload.clone(),
        config: r.config.clone(),
        node: node.label().to_string(),
        energy: r.energy.total,
        latency: r.latency,
        area: r.area,
        edp: r.edp,
        norm_energy: r.energy.total / base.energy.total,
        norm_latency: r.latency / base.latency,
        norm_area: r.area / base.area,
        norm_edp: r.edp / base.edp,
        read_energy: r.energy.read,
        write_energy: r.energy.write,
        compute_energy: r.energy.compute,
        standby_energy: r.energy.standby,
        refresh_energy: r.energy.refresh,
        footprint_bytes: r.footprint_total,
    }
}

fn runs(workloads: &[Workload], seed: u64) -> Result<Vec<WorkloadRun>> {
    workloads.par_iter().map(|w| run_workload(w, seed)).collect()
}

/// Every workload on every configuration at the table's node, normalized
/// per workload to the all-RRAM configuration (or the first one when RRAM
/// is absent). Rows are workload-major in input order.
pub fn memory_sweep(
    workloads: &[Workload],
    configs: &[MemoryConfig],
    techs: &TechTable,
    seed: u64,
    jobs: usize,
) -> Result<SweepReport> {
    if configs.is_empty() || workloads.is_empty() {
        return Err(Error::Config("sweep needs at least one workload and one configuration".into()));
    }
    let node = techs.node()?;
    let base_idx = configs
        .iter()
        .position(|c| *c == MemoryConfig::homogeneous(MemoryKind::Rram))
        .unwrap_or(0);
    pool(jobs)?.install(|| {
        let runs = runs(workloads, seed)?;
        let cells: Vec<(usize, usize)> = (0..runs.len())
            .flat_map(|w| (0..configs.len()).map(move |c| (w, c)))
            .collect();
        let reports: Vec<CostReport> = cells
            .par_iter()
            .map(|&(w, c)| estimate(&runs[w], &Architecture::template(configs[c].clone()), techs))
            .collect::<Result<_>>()?;
        let n = configs.len();
        let rows = reports
            .iter()
            .enumerate()
            .map(|(i, r)| row(r, node, &reports[i / n * n + base_idx]))
            .collect();
        Ok(SweepReport {
            schema_version: SWEEP_SCHEMA_VERSION,
            baseline: configs[base_idx].name.clone(),
            rows,
        })
    })
}

/// One workload on every configuration at every node, normalized to the
/// first configuration at the first node. Rows are node-major.
pub fn node_sweep(
    workload: &Workload,
    configs: &[MemoryConfig],
    nodes: &[TechNode],
    techs: &TechTable,
    seed: u64,
    jobs: usize,
) -> Result<SweepReport> {
    if configs.is_empty() || nodes.is_empty() {
        return Err(Error::Config("node sweep needs configurations and nodes".into()));
    }
    let tables = nodes.iter().map(|&n| techs.at_node(n)).collect::<Result<Vec<_>>>()?;
    pool(jobs)?.install(|| {
        let run = run_workload(workload, seed)?;
        let cells: Vec<(usize, usize)> = (0..nodes.len())
            .flat_map(|n| (0..configs.len()).map(move |c| (n, c)))
            .collect();
        let reports: Vec<CostReport> = cells
            .par_iter()
            .map(|&(n, c)| estimate(&run, &Architecture::template(configs[c].clone()), &tables[n]))
            .collect::<Result<_>>()?;
        let rows = reports
            .iter()
            .zip(&cells)
            .map(|(r, &(n, _))| row(r, nodes[n], &reports[0]))
            .collect();
        Ok(SweepReport {
            schema_version: SWEEP_SCHEMA_VERSION,
            baseline: format!("{}@{}", configs[0].name, nodes[0].label()),
            rows,
        })
    })
}
