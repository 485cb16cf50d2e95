//! Experiment configuration: JSON file, then flags and `VSA_` variables.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reasoning::resonator::Schedule;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Master seed threaded to every module (default 0).
    pub seed: u64,
    /// Overrides every section's dimension when set.
    pub dim: Option<usize>,
    pub data: DataConfig,
    pub encoder: EncoderConfig,
    pub learning: LearningConfig,
    pub reasoning: ReasoningConfig,
    pub navigation: NavigationSection,
    pub graph: GraphSection,
    pub ood: OodSection,
    pub cost: CostSection,
    pub sweep: SweepSection,
    pub bounds: BoundsSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    /// CSV dataset; synthetic Gaussian blobs when absent.
    pub input: Option<PathBuf>,
    /// Label column (default: the last column).
    pub label_column: Option<String>,
    /// Model stem for `infer` (default: `<out>/model`).
    pub model: Option<PathBuf>,
    pub test_fraction: f64,
    pub blob_classes: usize,
    pub blob_features: usize,
    pub blob_samples_per_class: usize,
}

impl Default for DataConfig {
    fn default() -> Self {
        DataConfig {
            input: None,
            label_column: None,
            model: None,
            test_fraction: 0.25,
            blob_classes: 2,
            blob_features: 8,
            blob_samples_per_class: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EncoderConfig {
    pub dim: usize,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        EncoderConfig {
            dim: crate::hv::DEFAULT_DIM,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LearningConfig {
    pub eta: f64,
    pub epochs: usize,
    pub k: usize,
    pub max_iters: usize,
}

impl Default for LearningConfig {
    fn default() -> Self {
        LearningConfig {
            eta: 0.5,
            epochs: 5,
            k: 2,
            max_iters: 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReasoningConfig {
    pub dim: usize,
    pub factors: usize,
    pub items: usize,
    pub trials: usize,
    pub schedule: Schedule,
    pub max_iters: usize,
    pub noise_p: f64,
}

impl Default for ReasoningConfig {
    fn default() -> Self {
        ReasoningConfig {
            dim: 1024,
            factors: 3,
            items: 8,
            trials: 200,
            schedule: Schedule::Parallel,
            max_iters: 100,
            noise_p: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NavigationSection {
    pub dim: usize,
    pub grid: usize,
    pub demos: usize,
}

impl Default for NavigationSection {
    fn default() -> Self {
        NavigationSection {
            dim: crate::hv::DEFAULT_DIM,
            grid: 24,
            demos: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraphSection {
    pub dim: usize,
    /// Edge list file; a random graph when absent.
    pub edges: Option<PathBuf>,
    pub vertices: usize,
    pub edge_probability: f64,
}

impl Default for GraphSection {
    fn default() -> Self {
        GraphSection {
            dim: crate::hv::DEFAULT_DIM,
            edges: None,
            vertices: 50,
            edge_probability: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OodSection {
    pub dim: usize,
    pub layer_dims: Vec<usize>,
    pub classes: usize,
    pub train_per_class: usize,
    pub eval: usize,
    pub noise_std: f64,
}

impl Default for OodSection {
    fn default() -> Self {
        OodSection {
            dim: crate::hv::DEFAULT_DIM,
            layer_dims: vec![16, 32, 8],
            classes: 4,
            train_per_class: 20,
            eval: 100,
            noise_std: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostSection {
    pub dim: usize,
    pub workload: String,
    /// `"SRAM"` or `"static/dynamic"` such as `"MRAM/SRAM"`.
    pub memory: String,
    pub node: String,
    /// Architecture JSON; the template with `memory` when absent.
    pub architecture: Option<PathBuf>,
    /// Technology table JSON; the shipped table when absent.
    pub tech_table: Option<PathBuf>,
}

impl Default for CostSection {
    fn default() -> Self {
        CostSection {
            dim: crate::imc::workload::DEFAULT_IMC_DIM,
            workload: "perception".into(),
            memory: "MRAM/SRAM".into(),
            node: "65".into(),
            architecture: None,
            tech_table: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub dim: usize,
    pub workloads: Vec<String>,
    pub memories: Vec<String>,
    /// Workload and memories of the node sweep.
    pub node_workload: String,
    pub node_memories: Vec<String>,
    pub nodes: Vec<String>,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            dim: crate::imc::workload::DEFAULT_IMC_DIM,
            workloads: vec!["perception".into(), "navigation_train".into(), "factorization".into()],
            memories: crate::imc::benchmark_configs().into_iter().map(|c| c.name).collect(),
            node_workload: "perception".into(),
            node_memories: crate::imc::node_configs().into_iter().map(|c| c.name).collect(),
            nodes: vec!["65".into(), "40_45".into(), "22".into()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsSection {
    pub dim: usize,
}

impl Default for BoundsSection {
    fn default() -> Self {
        BoundsSection {
            dim: crate::hv::DEFAULT_DIM,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Ok(cfg)
    }

    /// Applies the global dimension override.
    pub fn resolve(mut self) -> Result<Self> {
        if let Some(d) = self.dim {
            if d == 0 {
                return Err(Error::Config("dim must be >= 1".into()));
            }
            self.encoder.dim = d;
            self.reasoning.dim = d;
            self.navigation.dim = d;
            self.graph.dim = d;
            self.ood.dim = d;
            self.cost.dim = d;
            self.sweep.dim = d;
            self.bounds.dim = d;
        }
        self.validate()?;
        Ok(self)
    }

    /// Referenced files must exist.
    pub fn validate(&self) -> Result<()> {
        let files = [
            self.data.input.as_ref(),
            self.graph.edges.as_ref(),
            self.cost.architecture.as_ref(),
            self.cost.tech_table.as_ref(),
        ];
        for p in files.into_iter().flatten() {
            if !p.is_file() {
                return Err(Error::Config(format!("file not found: {}", p.display())));
            }
        }
        if !(0.0..1.0).contains(&self.data.test_fraction) {
            return Err(Error::Config(format!("test_fraction {} must lie in [0, 1)", self.data.test_fraction)));
        }
        Ok(())
    }
}
