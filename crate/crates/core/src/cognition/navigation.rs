//! Reactive navigation by sensor-actuator association.
//!
//! Training binds each demo's sensor vector `S = bundle(sensor_id * level(v))`
//! to its actuator vector `A = bundle(actuator_id * value)` and bundles the
//! pairs into one program vector `P`. Recall forms `S_q * P`, unbinds each
//! actuator id and cleans up against that actuator's value codebook.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::encoders::LevelEmbedding;
use crate::error::{Error, Result};
use crate::hv::ops::{accumulate, binarize};
use crate::hv::rng::{keyed_rng, split_seed};
use crate::hv::{bind, bundle, random_hv, unbind, Codebook, HyperVector, Repr};
use crate::reasoning::CleanupMemory;

/// One demonstration: sensor readings and the actuator values taken.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Demo {
    pub sensors: BTreeMap<String, f64>,
    pub actuators: BTreeMap<String, String>,
}

/// How a sensor reading becomes a value vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensorEncoding {
    /// Level embedding over `[sensor_min, sensor_max]`; nearby readings
    /// get similar vectors.
    #[default]
    Level,
    /// Readings rounded to integers, each with its own random vector.
    Discrete,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NavigationConfig {
    pub dim: usize,
    pub levels: usize,
    pub sensor_min: f64,
    pub sensor_max: f64,
    pub encoding: SensorEncoding,
    /// Clean-up scores below this are reported as not accepted.
    pub threshold: f64,
}

impl Default for NavigationConfig {
    fn default() -> Self {
        NavigationConfig {
            dim: crate::hv::DEFAULT_DIM,
            levels: crate::encoders::level::DEFAULT_LEVELS,
            sensor_min: 0.0,
            sensor_max: 1.0,
            encoding: SensorEncoding::Level,
            threshold: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Recall {
    pub actuator: String,
    pub value: String,
    pub score: f64,
    pub accepted: bool,
}

#[derive(Clone, Debug)]
pub struct NavigationProgram {
    sensor_ids: Codebook,
    actuator_ids: Codebook,
    values: LevelEmbedding,
    actuator_values: BTreeMap<String, Codebook>,
    accum: Vec<i64>,
    program: Option<HyperVector>,
    samples: usize,
    threshold: f64,
    encoding: SensorEncoding,
    seed: u64,
}

impl NavigationProgram {
    /// Registers sensors and actuators with their legal output values.
    pub fn new<S: AsRef<str>>(
        sensors: &[S],
        actuators: &[(S, Vec<S>)],
        cfg: &NavigationConfig,
        seed: u64,
    ) -> Result<Self> {
        let sensor_ids = Codebook::with_symbols("sensor", seed, cfg.dim, Repr::Bipolar, sensors.iter().map(AsRef::as_ref))?;
        let actuator_ids = Codebook::with_symbols(
            "actuator",
            seed,
            cfg.dim,
            Repr::Bipolar,
            actuators.iter().map(|(a, _)| a.as_ref()),
        )?;
        let mut actuator_values = BTreeMap::new();
        for (a, vals) in actuators {
            if vals.is_empty() {
                return Err(Error::InvalidInput(format!("actuator {:?} has no values", a.as_ref())));
            }
            let cb = Codebook::with_symbols(
                format!("actuation/{}", a.as_ref()),
                seed,
                cfg.dim,
                Repr::Bipolar,
                vals.iter().map(AsRef::as_ref),
            )?;
            actuator_values.insert(a.as_ref().to_string(), cb);
        }
        let values = LevelEmbedding::new(cfg.levels, cfg.sensor_min, cfg.sensor_max, seed, cfg.dim, Repr::Bipolar)?;
        Ok(NavigationProgram {
            accum: vec![0; cfg.dim],
            sensor_ids,
            actuator_ids,
            values,
            actuator_values,
            program: None,
            samples: 0,
            threshold: cfg.threshold,
            encoding: cfg.encoding,
            seed,
        })
    }

    pub fn dim(&self) -> usize {
        self.accum.len()
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn program(&self) -> Option<&HyperVector> {
        self.program.as_ref()
    }

    pub fn sensor_count(&self) -> usize {
        self.sensor_ids.len()
    }

    pub fn actuator_values(&self) -> &BTreeMap<String, Codebook> {
        &self.actuator_values
    }

    fn superpose(terms: Vec<HyperVector>, tie_seed: u64) -> Result<HyperVector> {
        if terms.len() == 1 {
            return Ok(terms.into_iter().next().expect("one term"));
        }
        Ok(bundle(&terms, tie_seed)?.binarized)
    }

    fn value_hv(&self, v: f64) -> Result<HyperVector> {
        match self.encoding {
            SensorEncoding::Level => Ok(self.values.encode(v)?.clone()),
            SensorEncoding::Discrete => {
                if !v.is_finite() {
                    return Err(Error::InvalidInput(format!("sensor reading {v}")));
                }
                random_hv("sensor-value", &(v.round() as i64).to_string(), self.seed, self.dim(), Repr::Bipolar)
            }
        }
    }

    pub fn sensor_hv(&self, readings: &BTreeMap<String, f64>) -> Result<HyperVector> {
        if readings.is_empty() {
            return Err(Error::InvalidInput("no sensor readings".into()));
        }
        let terms = readings
            .iter()
            .map(|(id, v)| bind(self.sensor_ids.get(id)?, &self.value_hv(*v)?))
            .collect::<Result<Vec<_>>>()?;
        Self::superpose(terms, split_seed(self.seed, "sensor-bundle", 0))
    }

    pub fn actuator_hv(&self, outputs: &BTreeMap<String, String>) -> Result<HyperVector> {
        if outputs.is_empty() {
            return Err(Error::InvalidInput("no actuator outputs".into()));
        }
        let terms = outputs
            .iter()
            .map(|(id, v)| {
                let values = self
                    .actuator_values
                    .get(id)
                    .ok_or_else(|| Error::MissingItem(format!("actuator {id:?} not registered")))?;
                bind(self.actuator_ids.get(id)?, values.get(v)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::superpose(terms, split_seed(self.seed, "actuator-bundle", 0))
    }

    /// Adds demos to the program and refreshes its binarized form.
    pub fn train(&mut self, demos: &[Demo]) -> Result<()> {
        if demos.is_empty() {
            return Err(Error::InvalidInput("no demos".into()));
        }
        for d in demos {
            let pair = bind(&self.sensor_hv(&d.sensors)?, &self.actuator_hv(&d.actuators)?)?;
            accumulate(&mut self.accum, &pair, 1);
            self.samples += 1;
        }
        self.program = Some(binarize(&self.accum, split_seed(self.seed, "program", 0), Repr::Bipolar)?);
        Ok(())
    }

    pub fn recall(&self, readings: &BTreeMap<String, f64>) -> Result<Vec<Recall>> {
        self.recall_encoded(&self.sensor_hv(readings)?)
    }

    /// Recall from an already-encoded sensor vector.
    pub fn recall_encoded(&self, query: &HyperVector) -> Result<Vec<Recall>> {
        let program = self
            .program
            .as_ref()
            .ok_or_else(|| Error::ModelState("navigation program is untrained".into()))?;
        let actions = bind(query, program)?;
        self.actuator_values
            .iter()
            .map(|(id, values)| {
                let m = CleanupMemory::new(values.clone())
                    .with_threshold(self.threshold)
                    .cleanup(&unbind(&actions, self.actuator_ids.get(id)?)?)?;
                Ok(Recall {
                    actuator: id.clone(),
                    value: m.nearest,
                    score: m.score,
                    accepted: m.symbol.is_some(),
                })
            })
            .collect()
    }
}

pub fn navigation_train<S: AsRef<str>>(
    demos: &[Demo],
    sensors: &[S],
    actuators: &[(S, Vec<S>)],
    cfg: &NavigationConfig,
    seed: u64,
) -> Result<NavigationProgram> {
    let mut p = NavigationProgram::new(sensors, actuators, cfg, seed)?;
    p.train(demos)?;
    Ok(p)
}

pub fn navigation_recall(prog: &NavigationProgram, readings: &BTreeMap<String, f64>) -> Result<Vec<Recall>> {
    prog.recall(readings)
}

pub const GRID_SENSORS: [&str; 6] = ["wall_n", "wall_e", "wall_s", "wall_w", "goal_dx", "goal_dy"];
pub const GRID_MOVES: [&str; 4] = ["N", "E", "S", "W"];

/// Grid-world workload: `count` demos at distinct cells of a `size x size`
/// grid, no two sharing a row or column. Sensors read integer wall
/// distances and the goal offset; the single actuator `move` steps along
/// the axis with the larger offset.
pub fn grid_demos(size: usize, count: usize, seed: u64) -> Result<Vec<Demo>> {
    if count == 0 || count >= size {
        return Err(Error::InvalidInput(format!("{count} demos do not fit a {size}x{size} grid")));
    }
    let goal = (size / 2) as i64;
    let mut rng = keyed_rng("grid-cells", &[], seed);
    let mut xs: Vec<i64> = (0..size as i64).filter(|&x| x != goal).collect();
    let mut ys = xs.clone();
    xs.shuffle(&mut rng);
    ys.shuffle(&mut rng);
    let far = size as i64 - 1;
    Ok(xs
        .into_iter()
        .zip(ys)
        .take(count)
        .map(|(x, y)| {
            let (dx, dy) = (goal - x, goal - y);
            let mv = match (dx.abs() >= dy.abs(), dx > 0, dy > 0) {
                (true, true, _) => "E",
                (true, false, _) => "W",
                (false, _, true) => "N",
                (false, _, false) => "S",
            };
            let sensors = [
                ("wall_n", far - y),
                ("wall_e", far - x),
                ("wall_s", y),
                ("wall_w", x),
                ("goal_dx", dx),
                ("goal_dy", dy),
            ];
            Demo {
                sensors: sensors.iter().map(|(k, v)| (k.to_string(), *v as f64)).collect(),
                actuators: [("move".to_string(), mv.to_string())].into(),
            }
        })
        .collect())
}

/// Discrete-reading config at dimension `dim` for [`grid_demos`].
pub fn grid_config(dim: usize) -> NavigationConfig {
    NavigationConfig {
        dim,
        encoding: SensorEncoding::Discrete,
        ..Default::default()
    }
}

/// Program skeleton for [`grid_demos`].
pub fn grid_program(cfg: &NavigationConfig, seed: u64) -> Result<NavigationProgram> {
    NavigationProgram::new(&GRID_SENSORS, &[("move", GRID_MOVES.to_vec())], cfg, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn cfg() -> NavigationConfig {
        grid_config(10_000)
    }

    #[test]
    fn one_demo_is_single_pair() {
        let demos = grid_demos(24, 1, 1).unwrap();
        let mut p = grid_program(&cfg(), 2).unwrap();
        p.train(&demos).unwrap();
        let pair = bind(&p.sensor_hv(&demos[0].sensors).unwrap(), &p.actuator_hv(&demos[0].actuators).unwrap()).unwrap();
        assert_eq!(p.program().unwrap(), &pair);
        let r = p.recall(&demos[0].sensors).unwrap();
        assert_eq!(r[0].value, demos[0].actuators["move"]);
        assert!(r[0].score >= 0.8);
    }

    #[test]
    fn two_actuators_round_trip() {
        let mut p = NavigationProgram::new(
            &["s1", "s2"],
            &[("left", vec!["fwd", "back"]), ("right", vec!["fwd", "back"])],
            &NavigationConfig::default(),
            3,
        )
        .unwrap();
        let d = Demo {
            sensors: [("s1".to_string(), 0.2), ("s2".to_string(), 0.9)].into(),
            actuators: [("left".to_string(), "fwd".to_string()), ("right".to_string(), "back".to_string())].into(),
        };
        p.train(std::slice::from_ref(&d)).unwrap();
        let r = p.recall(&d.sensors).unwrap();
        assert_eq!((r[0].value.as_str(), r[1].value.as_str()), ("fwd", "back"));
    }

    #[test]
    fn twenty_demos_recalled_and_probe_rejected() {
        let demos = grid_demos(24, 20, 5).unwrap();
        let mut p = grid_program(&cfg(), 6).unwrap();
        p.train(&demos).unwrap();
        assert_eq!(p.samples(), 20);
        for d in &demos {
            let r = p.recall(&d.sensors).unwrap();
            assert_eq!(r[0].value, d.actuators["move"]);
            assert!(r[0].accepted);
        }
        let probe = random_hv("probe", "s", 0, p.dim(), Repr::Bipolar).unwrap();
        assert!(p.recall_encoded(&probe).unwrap().iter().all(|r| !r.accepted));
    }

    #[test]
    fn noisy_level_readings_keep_action() {
        let sensors: Vec<String> = (0..10).map(|i| format!("d{i}")).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let demos: Vec<Demo> = ["N", "E", "S", "W"]
            .iter()
            .map(|mv| Demo {
                sensors: sensors.iter().map(|s| (s.clone(), rng.random_range(0.0..1.0))).collect(),
                actuators: [("move".to_string(), mv.to_string())].into(),
            })
            .collect();
        let p = navigation_train(&demos, &sensors, &[("move".to_string(), GRID_MOVES.iter().map(|m| m.to_string()).collect())], &NavigationConfig::default(), 8).unwrap();
        for d in &demos {
            let noisy: BTreeMap<String, f64> = d
                .sensors
                .iter()
                .map(|(k, v)| (k.clone(), (v + rng.random_range(-0.1..0.1)).clamp(0.0, 1.0)))
                .collect();
            assert_eq!(navigation_recall(&p, &noisy).unwrap()[0].value, d.actuators["move"]);
        }
    }

    #[test]
    fn grid_rejects_overfull() {
        assert!(grid_demos(8, 8, 0).is_err());
        assert!(grid_demos(8, 0, 0).is_err());
        assert_eq!(grid_demos(8, 7, 0).unwrap(), grid_demos(8, 7, 0).unwrap());
    }

    #[test]
    fn errors() {
        let p = grid_program(&cfg(), 0).unwrap();
        let demos = grid_demos(4, 2, 0).unwrap();
        assert!(matches!(p.recall(&demos[0].sensors), Err(Error::ModelState(_))));
        let mut bad = demos[0].clone();
        bad.sensors.insert("lidar".into(), 0.5);
        let mut q = grid_program(&cfg(), 0).unwrap();
        assert!(matches!(q.train(&[bad]), Err(Error::MissingItem(_))));
        let mut bad_act = demos[0].clone();
        bad_act.actuators.insert("move".into(), "UP".into());
        assert!(matches!(q.train(&[bad_act]), Err(Error::MissingItem(_))));
    }
}
