//! In-memory-computing cost model: technology tables, the architecture
//! template, kernel-graph lowering, workload mapping and tracing, cost
//! estimation, footprint bounds and sweeps.

pub mod arch;
pub mod cost;
pub mod footprint;
pub mod kernel;
pub mod mapping;
pub mod sweep;
pub mod tech;
pub mod trace;
pub mod workload;

pub use arch::{benchmark_configs, node_configs, Architecture, CoreKind, CoreSpec, Engine, MemoryConfig, Peripheries, Role};
pub use cost::{estimate_cost, CostReport, EnergySplit};
pub use footprint::{footprint_bounds, footprint_bytes, Category, DatasetScale, EncodingKind, WorkloadDescriptor};
pub use kernel::{lower_kernels, KernelGraph, KernelMapping, Strategy};
pub use mapping::{map_workload, trace_workload, workload_descriptor};
pub use sweep::{benchmark_workloads, estimate, memory_sweep, node_sweep, SweepReport, SweepRow};
pub use tech::{scale_node, MemoryKind, MemoryTechnology, TechNode, TechTable};
pub use trace::{Mapping, OpTrace};
pub use workload::{run_workload, Workload, WorkloadRun};
