//! Workloads whose functional runs feed the cost model.
//!
//! [`run_workload`] executes the actual pipeline (encoders, classifier,
//! navigation program, resonator) and records the counts that drive the
//! operation trace.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::cognition::navigation::{grid_config, grid_demos, grid_program, GRID_MOVES, GRID_SENSORS};
use crate::datasets::{gaussian_blobs, train_test_split};
use crate::encoders::{multimodal_encode, LevelEmbedding, ModalRecord, ModalityRegistry, ProjectionEncoder, Quantizer};
use crate::error::{Error, Result};
use crate::hv::rng::{keyed_rng, split_seed};
use crate::hv::{bundle, rank_score, HyperVector, Metric, Repr};
use crate::learning::classifier::train_single_pass;
use crate::reasoning::resonator::{factorize, random_problem, Schedule};

pub const DEFAULT_IMC_DIM: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassificationParams {
    pub dim: usize,
    pub classes: usize,
    pub features: usize,
    pub train_per_class: usize,
    /// Inference queries traced.
    pub samples: usize,
    /// Seconds between queries.
    pub interval: f64,
}

impl Default for ClassificationParams {
    fn default() -> Self {
        ClassificationParams {
            dim: DEFAULT_IMC_DIM,
            classes: 2,
            features: 16,
            train_per_class: 20,
            samples: 50,
            interval: 10e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PerceptionParams {
    pub dim: usize,
    pub modalities: usize,
    /// Features per modality.
    pub features: usize,
    /// Timestamps per sample.
    pub steps: usize,
    pub classes: usize,
    pub levels: usize,
    pub samples: usize,
    pub interval: f64,
}

impl Default for PerceptionParams {
    fn default() -> Self {
        PerceptionParams {
            dim: DEFAULT_IMC_DIM,
            modalities: 3,
            features: 8,
            steps: 4,
            classes: 4,
            levels: 16,
            samples: 50,
            interval: 10e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NavigationParams {
    pub dim: usize,
    pub grid: usize,
    pub demos: usize,
    pub interval: f64,
}

impl Default for NavigationParams {
    fn default() -> Self {
        NavigationParams {
            dim: DEFAULT_IMC_DIM,
            grid: 24,
            demos: 20,
            interval: 20e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FactorizationParams {
    pub dim: usize,
    pub factors: usize,
    pub items: usize,
    pub queries: usize,
    pub schedule: Schedule,
    pub max_iters: usize,
    pub noise_p: f64,
    pub interval: f64,
}

impl Default for FactorizationParams {
    fn default() -> Self {
        FactorizationParams {
            dim: DEFAULT_IMC_DIM,
            factors: 3,
            items: 8,
            queries: 200,
            schedule: Schedule::Parallel,
            max_iters: 100,
            noise_p: 0.0,
            interval: 5e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Workload {
    Classification(ClassificationParams),
    Perception(PerceptionParams),
    NavigationTrain(NavigationParams),
    NavigationRecall(NavigationParams),
    Factorization(FactorizationParams),
}

impl Workload {
    pub fn name(&self) -> &'static str {
        match self {
            Workload::Classification(_) => "classification",
            Workload::Perception(_) => "perception",
            Workload::NavigationTrain(_) => "navigation_train",
            Workload::NavigationRecall(_) => "navigation_recall",
            Workload::Factorization(_) => "factorization",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Workload::Classification(p) => p.dim,
            Workload::Perception(p) => p.dim,
            Workload::NavigationTrain(p) | Workload::NavigationRecall(p) => p.dim,
            Workload::Factorization(p) => p.dim,
        }
    }

    pub fn interval(&self) -> f64 {
        match self {
            Workload::Classification(p) => p.interval,
            Workload::Perception(p) => p.interval,
            Workload::NavigationTrain(p) | Workload::NavigationRecall(p) => p.interval,
            Workload::Factorization(p) => p.interval,
        }
    }

    /// Looks up a workload by name with default parameters.
    pub fn by_name(name: &str) -> Result<Self> {
        Ok(match name {
            "classification" => Workload::Classification(Default::default()),
            "perception" => Workload::Perception(Default::default()),
            "navigation_train" | "navigation" => Workload::NavigationTrain(Default::default()),
            "navigation_recall" => Workload::NavigationRecall(Default::default()),
            "factorization" => Workload::Factorization(Default::default()),
            "factorization_sequential" => Workload::Factorization(FactorizationParams {
                schedule: Schedule::Sequential,
                ..Default::default()
            }),
            _ => return Err(Error::Config(format!("unknown workload {name:?}"))),
        })
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        match &mut self {
            Workload::Classification(p) => p.dim = dim,
            Workload::Perception(p) => p.dim = dim,
            Workload::NavigationTrain(p) | Workload::NavigationRecall(p) => p.dim = dim,
            Workload::Factorization(p) => p.dim = dim,
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |what: &str, v: usize| {
            if v == 0 {
                Err(Error::Config(format!("{}: {what} must be >= 1", self.name())))
            } else {
                Ok(())
            }
        };
        positive("dim", self.dim())?;
        if !(self.interval() >= 0.0 && self.interval().is_finite()) {
            return Err(Error::Config(format!("{}: interval must be finite and >= 0", self.name())));
        }
        match self {
            Workload::Classification(p) => {
                positive("classes", p.classes)?;
                positive("features", p.features)?;
                positive("train_per_class", p.train_per_class)?;
                positive("samples", p.samples)
            }
            Workload::Perception(p) => {
                positive("modalities", p.modalities)?;
                positive("features", p.features)?;
                positive("steps", p.steps)?;
                positive("classes", p.classes)?;
                positive("levels", p.levels)?;
                positive("samples", p.samples)
            }
            Workload::NavigationTrain(p) | Workload::NavigationRecall(p) => {
                positive("demos", p.demos)?;
                if p.demos >= p.grid {
                    return Err(Error::Config(format!("{} demos do not fit a {} grid", p.demos, p.grid)));
                }
                Ok(())
            }
            Workload::Factorization(p) => {
                positive("factors", p.factors)?;
                positive("items", p.items)?;
                positive("queries", p.queries)?;
                positive("max_iters", p.max_iters)
            }
        }
    }
}

/// Counts recorded while executing a workload.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RunCounts {
    Classification {
        test_samples: usize,
        accuracy: f64,
    },
    Perception {
        /// Records (one modality at one timestamp) encoded across samples.
        records: u64,
        /// Feature readings bound across samples.
        readings: u64,
        accuracy: f64,
    },
    Navigation {
        demos: usize,
        sensor_values: usize,
        actuator_values: usize,
        recalled: usize,
    },
    Factorization {
        /// Iterations of each query.
        iterations: Vec<usize>,
        correct: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorkloadRun {
    pub workload: Workload,
    pub seed: u64,
    pub counts: RunCounts,
}

impl WorkloadRun {
    /// Samples (queries, demos) spread over the run's duration.
    pub fn samples(&self) -> usize {
        match (&self.workload, &self.counts) {
            (Workload::Classification(p), _) => p.samples,
            (Workload::Perception(p), _) => p.samples,
            (_, RunCounts::Navigation { demos, .. }) => *demos,
            (Workload::Factorization(p), _) => p.queries,
            _ => 0,
        }
    }

    pub fn duration(&self) -> f64 {
        self.samples() as f64 * self.workload.interval()
    }
}

pub fn run_workload(w: &Workload, seed: u64) -> Result<WorkloadRun> {
    w.validate()?;
    let counts = match w {
        Workload::Classification(p) => run_classification(p, seed)?,
        Workload::Perception(p) => run_perception(p, seed)?,
        Workload::NavigationTrain(p) | Workload::NavigationRecall(p) => run_navigation(p, seed)?,
        Workload::Factorization(p) => run_factorization(p, seed)?,
    };
    Ok(WorkloadRun {
        workload: w.clone(),
        seed,
        counts,
    })
}

fn run_classification(p: &ClassificationParams, seed: u64) -> Result<RunCounts> {
    let per_class = p.train_per_class + p.samples.div_ceil(p.classes);
    let ds = gaussian_blobs(p.classes, p.features, per_class, 3.0, 1.0, seed);
    let frac = (p.samples as f64 / ds.len() as f64).min(1.0);
    let (train, test) = train_test_split(&ds, frac, seed);
    let enc = ProjectionEncoder::new(p.features, p.dim, split_seed(seed, "imc-projection", 0), Quantizer::Sign)?;
    let model = train_single_pass(&train, None, enc, Metric::Cosine, seed)?;
    let test = test.subset(&(0..test.len().min(p.samples)).collect::<Vec<_>>());
    Ok(RunCounts::Classification {
        test_samples: test.len(),
        accuracy: model.accuracy(&test)?,
    })
}

fn run_perception(p: &PerceptionParams, seed: u64) -> Result<RunCounts> {
    let mut registry = ModalityRegistry::new();
    let mods: Vec<String> = (0..p.modalities).map(|m| format!("m{m}")).collect();
    let feats: Vec<String> = (0..p.features).map(|f| format!("x{f}")).collect();
    for m in &mods {
        registry.register(m, feats.iter().cloned());
    }
    let ids = registry.id_codebook(split_seed(seed, "imc-ids", 0), p.dim, Repr::Binary)?;
    let values = LevelEmbedding::new(p.levels, 0.0, 1.0, split_seed(seed, "imc-levels", 0), p.dim, Repr::Binary)?;
    let mut rng = keyed_rng("imc-perception", &[], seed);
    let noise = Normal::new(0.0, 0.05).expect("noise std");
    // prototype[c][m][t][f]
    let protos: Vec<Vec<Vec<Vec<f64>>>> = (0..p.classes)
        .map(|_| {
            (0..p.modalities)
                .map(|_| (0..p.steps).map(|_| (0..p.features).map(|_| rng.random::<f64>()).collect()).collect())
                .collect()
        })
        .collect();
    let mut records = 0u64;
    let mut readings = 0u64;
    let mut sample = |c: usize, rng: &mut rand_chacha::ChaCha8Rng, count: bool| -> Vec<ModalRecord> {
        let mut out = Vec::new();
        for (m, name) in mods.iter().enumerate() {
            for (t, proto) in protos[c][m].iter().enumerate().take(p.steps) {
                let features: BTreeMap<String, f64> = feats
                    .iter()
                    .enumerate()
                    .map(|(f, k)| (k.clone(), (proto[f] + noise.sample(rng)).clamp(0.0, 1.0)))
                    .collect();
                if count {
                    records += 1;
                    readings += features.len() as u64;
                }
                out.push(ModalRecord {
                    modality: name.clone(),
                    t: t as u64,
                    features,
                });
            }
        }
        out
    };
    let enc_seed = split_seed(seed, "imc-fusion", 0);
    let mut classes: Vec<HyperVector> = Vec::with_capacity(p.classes);
    for c in 0..p.classes {
        let hvs = (0..3)
            .map(|_| multimodal_encode(&sample(c, &mut rng, false), &registry, &ids, &values, enc_seed))
            .collect::<Result<Vec<_>>>()?;
        classes.push(bundle(&hvs, split_seed(seed, "imc-class", c as u64))?.binarized);
    }
    let mut correct = 0usize;
    for i in 0..p.samples {
        let c = i % p.classes;
        let q = multimodal_encode(&sample(c, &mut rng, true), &registry, &ids, &values, enc_seed)?;
        let mut best = (f64::MIN, 0);
        for (k, h) in classes.iter().enumerate() {
            let s = rank_score(&q, h, Metric::Cosine)?;
            if s > best.0 {
                best = (s, k);
            }
        }
        correct += (best.1 == c) as usize;
    }
    Ok(RunCounts::Perception {
        records,
        readings,
        accuracy: correct as f64 / p.samples as f64,
    })
}

fn run_navigation(p: &NavigationParams, seed: u64) -> Result<RunCounts> {
    let demos = grid_demos(p.grid, p.demos, seed)?;
    let mut prog = grid_program(&grid_config(p.dim), seed)?;
    prog.train(&demos)?;
    let mut recalled = 0;
    for d in &demos {
        let r = prog.recall(&d.sensors)?;
        recalled += r.iter().all(|x| x.accepted && Some(&x.value) == d.actuators.get(&x.actuator)) as usize;
    }
    Ok(RunCounts::Navigation {
        demos: demos.len(),
        sensor_values: grid_sensor_values(p.grid),
        actuator_values: GRID_MOVES.len(),
        recalled,
    })
}

/// Distinct readings a grid sensor can take: offsets in `-(g-1)..=g-1`.
pub fn grid_sensor_values(grid: usize) -> usize {
    2 * grid - 1
}

pub fn grid_sensor_count() -> usize {
    GRID_SENSORS.len()
}

fn run_factorization(p: &FactorizationParams, seed: u64) -> Result<RunCounts> {
    let mut iterations = Vec::with_capacity(p.queries);
    let mut correct = 0;
    for q in 0..p.queries {
        let s = split_seed(seed, "imc-factorize", q as u64);
        let prob = random_problem(p.factors, p.items, p.dim, s)?;
        let r = factorize(&prob.composite, &prob.codebooks, p.max_iters, p.schedule, p.noise_p, s)?;
        iterations.push(r.iterations);
        correct += (r.indices == prob.truth) as usize;
    }
    Ok(RunCounts::Factorization { iterations, correct })
}
