//! Resonator network for factorizing a bound composite `f = x_1 * ... * x_F`.
//!
//! Factor `i` is re-estimated as `g(X_i X_i^T (f * prod_{j != i} x_j))`, with
//! `X_i X_i^T` evaluated in two stages: the similarity vector `s = X_i^T v`
//! and then the weighted item sum `X_i s`. `g` is the sign function with
//! seeded bits for zero sums. Optional noise flips estimate elements after
//! `g`. Convergence is declared when every factor's `g` output is unchanged
//! between two consecutive iterations.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hv::ops::binarize;
use crate::hv::rng::{keyed_rng, split_seed};
use crate::hv::{bind, inject_noise, rank_score, Codebook, HyperVector, Metric, Repr};
use crate::reasoning::rules::compose;

/// Final similarity below which a decode is flagged as spurious.
pub const SPURIOUS_SIMILARITY: f64 = 0.5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Schedule {
    /// Every factor reads the previous iteration's estimates.
    #[default]
    Parallel,
    /// Factors update in order, each reading the freshest estimates.
    Sequential,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResonatorState {
    /// Current estimates (after optional noise), one Bipolar vector per factor.
    pub estimates: Vec<HyperVector>,
    /// Sign outputs before noise, used for convergence and decoding.
    pub clean: Vec<HyperVector>,
    pub iteration: usize,
    pub converged: Vec<bool>,
    pub schedule: Schedule,
    pub noise_p: f64,
    pub seed: u64,
}

fn check_codebooks(codebooks: &[Codebook], dim: usize) -> Result<()> {
    if codebooks.is_empty() {
        return Err(Error::InvalidInput("resonator needs at least one codebook".into()));
    }
    for cb in codebooks {
        if cb.is_empty() {
            return Err(Error::InvalidMemory(format!("codebook {:?} is empty", cb.name())));
        }
        if cb.dim() != dim || cb.repr() != Repr::Bipolar {
            return Err(Error::Shape(format!(
                "codebook {:?} is {}-dim {}, expected {dim}-dim bipolar",
                cb.name(),
                cb.dim(),
                cb.repr()
            )));
        }
    }
    Ok(())
}

impl ResonatorState {
    /// Starts every factor at the superposition of its codebook.
    pub fn init(codebooks: &[Codebook], schedule: Schedule, noise_p: f64, seed: u64) -> Result<Self> {
        let dim = codebooks.first().map(Codebook::dim).unwrap_or(0);
        check_codebooks(codebooks, dim)?;
        if !(0.0..=1.0).contains(&noise_p) {
            return Err(Error::InvalidProbability(noise_p));
        }
        let estimates = codebooks
            .iter()
            .enumerate()
            .map(|(i, cb)| {
                let mut sums = vec![0i64; dim];
                for v in cb.vectors() {
                    crate::hv::ops::accumulate(&mut sums, v, 1);
                }
                binarize(&sums, split_seed(seed, "resonator-init", i as u64), Repr::Bipolar)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ResonatorState {
            clean: estimates.clone(),
            converged: vec![false; estimates.len()],
            estimates,
            iteration: 0,
            schedule,
            noise_p,
            seed,
        })
    }
}

/// `sign(X X^T v)` for one codebook.
pub fn project_cleanup(cb: &Codebook, v: &HyperVector, tie_seed: u64) -> Result<HyperVector> {
    let dim = v.dim();
    let mut sums = vec![0i64; dim];
    for item in cb.vectors() {
        let s = rank_score(v, item, Metric::Dot)? as i64;
        crate::hv::ops::accumulate(&mut sums, item, s);
    }
    binarize(&sums, tie_seed, Repr::Bipolar)
}

fn unbind_others(f: &HyperVector, estimates: &[HyperVector], skip: usize) -> Result<HyperVector> {
    estimates
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != skip)
        .try_fold(f.clone(), |acc, (_, e)| bind(&acc, e))
}

fn update_factor(state: &ResonatorState, f: &HyperVector, cb: &Codebook, estimates: &[HyperVector], i: usize) -> Result<(HyperVector, HyperVector)> {
    let v = unbind_others(f, estimates, i)?;
    // Tie bits depend on the factor only, so the noiseless update is a fixed
    // map and any recurring state is a true limit cycle.
    let clean = project_cleanup(cb, &v, split_seed(state.seed, "resonator-tie", i as u64))?;
    let key = (state.iteration * estimates.len() + i) as u64;
    let noisy = inject_noise(&clean, state.noise_p, split_seed(state.seed, "resonator-noise", key))?;
    Ok((clean, noisy))
}

/// One full iteration over every factor.
pub fn resonator_step(state: &ResonatorState, f: &HyperVector, codebooks: &[Codebook]) -> Result<ResonatorState> {
    check_codebooks(codebooks, f.dim())?;
    if f.repr() != Repr::Bipolar {
        return Err(Error::Shape(format!("composite must be bipolar, got {}", f.repr())));
    }
    if codebooks.len() != state.estimates.len() {
        return Err(Error::Shape(format!(
            "{} codebooks for {} estimates",
            codebooks.len(),
            state.estimates.len()
        )));
    }
    let (clean, estimates) = match state.schedule {
        Schedule::Parallel => {
            let out = codebooks
                .par_iter()
                .enumerate()
                .map(|(i, cb)| update_factor(state, f, cb, &state.estimates, i))
                .collect::<Result<Vec<_>>>()?;
            out.into_iter().unzip()
        }
        Schedule::Sequential => {
            let mut est = state.estimates.clone();
            let mut clean = Vec::with_capacity(est.len());
            for (i, cb) in codebooks.iter().enumerate() {
                let (c, n) = update_factor(state, f, cb, &est, i)?;
                est[i] = n;
                clean.push(c);
            }
            (clean, est)
        }
    };
    let converged = clean.iter().zip(&state.clean).map(|(a, b)| a == b).collect();
    Ok(ResonatorState {
        estimates,
        clean,
        iteration: state.iteration + 1,
        converged,
        schedule: state.schedule,
        noise_p: state.noise_p,
        seed: state.seed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorizeResult {
    pub factors: Vec<String>,
    pub indices: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
    /// Cosine between the re-composed decode and `f`.
    pub similarity: f64,
    /// Set when the decode does not explain `f` (similarity below threshold).
    pub spurious: bool,
    /// Set when a previously visited non-fixed state recurred.
    pub limit_cycle: bool,
}

/// Nearest item per factor by dot product; ties go to the earlier item.
pub fn decode(estimates: &[HyperVector], codebooks: &[Codebook]) -> Result<Vec<usize>> {
    estimates
        .iter()
        .zip(codebooks)
        .map(|(e, cb)| {
            let mut best = (f64::MIN, 0);
            for (k, item) in cb.vectors().iter().enumerate() {
                let s = rank_score(e, item, Metric::Dot)?;
                if s > best.0 {
                    best = (s, k);
                }
            }
            Ok(best.1)
        })
        .collect()
}

fn state_key(clean: &[HyperVector]) -> Vec<u64> {
    clean
        .iter()
        .flat_map(|v| v.words().expect("bipolar").iter().copied())
        .collect()
}

/// Iterates until every factor is stable or `max_iters` is reached.
pub fn factorize(
    f: &HyperVector,
    codebooks: &[Codebook],
    max_iters: usize,
    schedule: Schedule,
    noise_p: f64,
    seed: u64,
) -> Result<FactorizeResult> {
    if max_iters == 0 {
        return Err(Error::InvalidHyperparameter("max_iters must be >= 1".into()));
    }
    let mut state = ResonatorState::init(codebooks, schedule, noise_p, seed)?;
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    seen.insert(state_key(&state.clean), 0);
    let mut limit_cycle = false;
    let mut converged = false;
    while state.iteration < max_iters {
        state = resonator_step(&state, f, codebooks)?;
        if state.converged.iter().all(|c| *c) {
            converged = true;
            break;
        }
        if seen.insert(state_key(&state.clean), state.iteration).is_some() {
            limit_cycle = true;
            if noise_p == 0.0 {
                // Without noise the trajectory is periodic from here on.
                break;
            }
        }
    }
    let indices = decode(&state.clean, codebooks)?;
    let items: Vec<HyperVector> = indices
        .iter()
        .zip(codebooks)
        .map(|(&k, cb)| cb.vectors()[k].clone())
        .collect();
    let recomposed = if items.len() == 1 {
        items[0].clone()
    } else {
        compose(&items)?
    };
    let similarity = rank_score(&recomposed, f, Metric::Cosine)?;
    Ok(FactorizeResult {
        factors: indices
            .iter()
            .zip(codebooks)
            .map(|(&k, cb)| cb.symbols()[k].clone())
            .collect(),
        indices,
        iterations: state.iteration,
        converged,
        similarity,
        spurious: similarity < SPURIOUS_SIMILARITY,
        limit_cycle,
    })
}

/// A seeded instance: `factors` codebooks of `items` bipolar vectors and a
/// composite of one item drawn from each.
#[derive(Clone, Debug)]
pub struct Problem {
    pub codebooks: Vec<Codebook>,
    pub truth: Vec<usize>,
    pub composite: HyperVector,
}

pub fn random_problem(factors: usize, items: usize, dim: usize, seed: u64) -> Result<Problem> {
    if factors == 0 || items == 0 {
        return Err(Error::InvalidInput("problem needs factors >= 1 and items >= 1".into()));
    }
    let codebooks = (0..factors)
        .map(|i| {
            Codebook::with_symbols(
                format!("factor{i}"),
                seed,
                dim,
                Repr::Bipolar,
                (0..items).map(|k| format!("f{i}_{k}")),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rng = keyed_rng("problem-truth", &[], seed);
    let truth: Vec<usize> = (0..factors).map(|_| rng.random_range(0..items)).collect();
    let picked: Vec<HyperVector> = truth
        .iter()
        .zip(&codebooks)
        .map(|(&k, cb)| cb.vectors()[k].clone())
        .collect();
    let composite = if picked.len() == 1 {
        picked[0].clone()
    } else {
        compose(&picked)?
    };
    Ok(Problem {
        codebooks,
        truth,
        composite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hv::{inject_noise, random_hv};

    #[test]
    fn single_factor_snaps_in_one_step() {
        let p = random_problem(1, 8, 1024, 3).unwrap();
        let f = inject_noise(&p.composite, 0.2, 1).unwrap();
        let s0 = ResonatorState::init(&p.codebooks, Schedule::Parallel, 0.0, 0).unwrap();
        let s1 = resonator_step(&s0, &f, &p.codebooks).unwrap();
        assert_eq!(s1.estimates[0], p.codebooks[0].vectors()[p.truth[0]]);
    }

    #[test]
    fn true_factors_are_a_fixed_point() {
        for seed in 0..20 {
            let p = random_problem(3, 16, 1024, seed).unwrap();
            let mut s = ResonatorState::init(&p.codebooks, Schedule::Parallel, 0.0, seed).unwrap();
            s.estimates = p.truth.iter().zip(&p.codebooks).map(|(&k, cb)| cb.vectors()[k].clone()).collect();
            s.clean = s.estimates.clone();
            let next = resonator_step(&s, &p.composite, &p.codebooks).unwrap();
            assert_eq!(next.estimates, s.estimates, "seed {seed}");
            assert!(next.converged.iter().all(|c| *c));
        }
    }

    #[test]
    fn solves_small_problem_both_schedules() {
        let p = random_problem(3, 4, 1024, 7).unwrap();
        for schedule in [Schedule::Parallel, Schedule::Sequential] {
            let r = factorize(&p.composite, &p.codebooks, 100, schedule, 0.0, 1).unwrap();
            assert!(r.converged);
            assert_eq!(r.indices, p.truth);
            assert_eq!(r.similarity, 1.0);
        }
    }

    #[test]
    fn unrelated_target_is_flagged() {
        let p = random_problem(3, 8, 1024, 2).unwrap();
        let f = random_hv("x", "y", 9, 1024, Repr::Bipolar).unwrap();
        let r = factorize(&f, &p.codebooks, 50, Schedule::Parallel, 0.0, 1).unwrap();
        assert!(!r.converged || r.spurious);
        assert!(r.similarity < SPURIOUS_SIMILARITY);
        assert!(r.iterations <= 50);
    }

    #[test]
    fn estimates_stay_bipolar() {
        let p = random_problem(2, 6, 64, 5).unwrap();
        let s0 = ResonatorState::init(&p.codebooks, Schedule::Sequential, 0.1, 0).unwrap();
        let s1 = resonator_step(&s0, &p.composite, &p.codebooks).unwrap();
        assert!(s1.estimates.iter().all(|e| e.repr() == Repr::Bipolar && e.dim() == 64));
    }

    #[test]
    fn rejects_binary_codebooks() {
        let cb = Codebook::with_symbols("b", 1, 64, Repr::Binary, ["a"]).unwrap();
        assert!(ResonatorState::init(&[cb], Schedule::Parallel, 0.0, 0).is_err());
    }
}
