//! Role-filler records and rule queries by unbinding.

use serde::Serialize;

use super::cleanup::{CleanupMatch, CleanupMemory};
use crate::error::{Error, Result};
use crate::hv::rng::split_seed;
use crate::hv::{bind, bundle, unbind, Codebook, HyperVector, Repr};

/// Left fold of `bind` over two or more factors.
pub fn compose(factors: &[HyperVector]) -> Result<HyperVector> {
    if factors.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "compose needs >= 2 factors, got {}",
            factors.len()
        )));
    }
    factors[1..]
        .iter()
        .try_fold(factors[0].clone(), |acc, f| bind(&acc, f))
}

/// Bundle of `role * filler` pairs; a single pair is returned unbundled.
pub fn record(pairs: &[(&HyperVector, &HyperVector)], tie_seed: u64) -> Result<HyperVector> {
    let bound = pairs
        .iter()
        .map(|(r, f)| bind(r, f))
        .collect::<Result<Vec<_>>>()?;
    match bound.len() {
        0 => Err(Error::EmptyBundle),
        1 => Ok(bound.into_iter().next().expect("one pair")),
        _ => Ok(bundle(&bound, tie_seed)?.binarized),
    }
}

/// Unbinds `key` from `composite` and cleans up the result.
pub fn query_unbind(composite: &HyperVector, key: &HyperVector, cleanup: &CleanupMemory) -> Result<CleanupMatch> {
    cleanup.cleanup(&unbind(composite, key)?)
}

/// Two country records and their mapping vector `F = States * Mexico`.
#[derive(Clone, Debug)]
pub struct CountryMapping {
    pub items: Codebook,
    pub states: HyperVector,
    pub mexico: HyperVector,
    pub mapping: HyperVector,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountryAnswer {
    pub query: String,
    pub answer: CleanupMatch,
}

impl CountryMapping {
    /// Builds `States = [name*USA + cur*DOL]`, `Mexico = [name*MEX + cur*PES]`.
    pub fn new(seed: u64, dim: usize) -> Result<Self> {
        let items = Codebook::with_symbols(
            "country",
            seed,
            dim,
            Repr::Binary,
            ["name", "cur", "USA", "MEX", "DOL", "PES"],
        )?;
        let g = |s: &str| items.get(s);
        let states = record(&[(g("name")?, g("USA")?), (g("cur")?, g("DOL")?)], split_seed(seed, "states", 0))?;
        let mexico = record(&[(g("name")?, g("MEX")?), (g("cur")?, g("PES")?)], split_seed(seed, "mexico", 0))?;
        let mapping = bind(&states, &mexico)?;
        Ok(CountryMapping {
            items,
            states,
            mexico,
            mapping,
        })
    }

    /// "What is the `symbol` of the other country?": cleans up `symbol * F`.
    pub fn ask(&self, symbol: &str, threshold: f64) -> Result<CountryAnswer> {
        let memory = CleanupMemory::new(self.items.clone()).with_threshold(threshold);
        Ok(CountryAnswer {
            query: symbol.to_string(),
            answer: query_unbind(&self.mapping, self.items.get(symbol)?, &memory)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hv::{random_hv, Repr};

    fn rv(s: &str, d: usize) -> HyperVector {
        random_hv("t", s, 3, d, Repr::Binary).unwrap()
    }

    #[test]
    fn compose_basics() {
        let (a, b, c) = (rv("a", 300), rv("b", 300), rv("c", 300));
        assert_eq!(compose(&[a.clone(), b.clone()]).unwrap(), bind(&a, &b).unwrap());
        let abc = compose(&[a.clone(), b.clone(), c.clone()]).unwrap();
        assert_eq!(abc, compose(&[c.clone(), a.clone(), b.clone()]).unwrap());
        assert_eq!(unbind(&unbind(&abc, &b).unwrap(), &c).unwrap(), a);
        assert!(compose(&[a]).is_err());
    }

    #[test]
    fn exact_pair_recovery() {
        let cb = Codebook::with_symbols("f", 1, 1000, Repr::Binary, ["a", "z"]).unwrap();
        let b = rv("b", 1000);
        let x = bind(cb.get("a").unwrap(), &b).unwrap();
        let m = query_unbind(&x, &b, &CleanupMemory::new(cb)).unwrap();
        assert_eq!((m.symbol.as_deref(), m.score), (Some("a"), 1.0));
    }

    #[test]
    fn dollar_of_mexico() {
        let world = CountryMapping::new(17, 10_000).unwrap();
        let a = world.ask("DOL", 0.1).unwrap();
        assert_eq!(a.answer.symbol.as_deref(), Some("PES"));
        assert_eq!(world.ask("USA", 0.1).unwrap().answer.symbol.as_deref(), Some("MEX"));
    }

    #[test]
    fn five_role_record() {
        let d = 10_000;
        let roles = Codebook::with_symbols("roles", 4, d, Repr::Binary, (0..5).map(|i| format!("r{i}"))).unwrap();
        let fillers = Codebook::with_symbols("fill", 4, d, Repr::Binary, (0..12).map(|i| format!("f{i}"))).unwrap();
        let pairs: Vec<_> = (0..5)
            .map(|i| (roles.vectors()[i].clone(), fillers.vectors()[2 * i + 1].clone()))
            .collect();
        let refs: Vec<_> = pairs.iter().map(|(r, f)| (r, f)).collect();
        let rec = record(&refs, 9).unwrap();
        let mem = CleanupMemory::new(fillers.clone());
        for i in 0..5 {
            let m = query_unbind(&rec, &roles.vectors()[i], &mem).unwrap();
            assert_eq!(m.nearest, format!("f{}", 2 * i + 1));
            let scores = mem.scores(&unbind(&rec, &roles.vectors()[i]).unwrap()).unwrap();
            let runner_up = scores
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != m.index)
                .map(|(_, s)| *s)
                .fold(f64::MIN, f64::max);
            assert!(m.score - runner_up > 0.2, "{} vs {runner_up}", m.score);
        }
    }
}
