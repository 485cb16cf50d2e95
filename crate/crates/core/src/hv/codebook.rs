use std::collections::BTreeMap;

use super::{random_hv, HyperVector, Repr};
use crate::error::{Error, Result};

/// Item memory: named symbols mapped to random hypervectors.
///
/// Entries keep insertion order, which is the order used for tie-breaking in
/// clean-up and for factor indices in the resonator.
#[derive(Clone, Debug, PartialEq)]
pub struct Codebook {
    name: String,
    dim: usize,
    repr: Repr,
    seed: u64,
    symbols: Vec<String>,
    vectors: Vec<HyperVector>,
    index: BTreeMap<String, usize>,
}

impl Codebook {
    pub fn new(name: impl Into<String>, seed: u64, dim: usize, repr: Repr) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Codebook {
            name: name.into(),
            dim,
            repr,
            seed,
            symbols: Vec::new(),
            vectors: Vec::new(),
            index: BTreeMap::new(),
        })
    }

    pub fn with_symbols<S: AsRef<str>>(
        name: impl Into<String>,
        seed: u64,
        dim: usize,
        repr: Repr,
        symbols: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let mut cb = Self::new(name, seed, dim, repr)?;
        for s in symbols {
            cb.insert(s.as_ref())?;
        }
        Ok(cb)
    }

    /// Generates and stores the vector for `symbol`; a no-op if present.
    pub fn insert(&mut self, symbol: &str) -> Result<&HyperVector> {
        if let Some(&i) = self.index.get(symbol) {
            return Ok(&self.vectors[i]);
        }
        let hv = random_hv(&self.name, symbol, self.seed, self.dim, self.repr)?;
        self.push(symbol, hv)
    }

    /// Stores an explicit vector (e.g. a level embedding) under `symbol`.
    pub fn insert_vector(&mut self, symbol: &str, hv: HyperVector) -> Result<&HyperVector> {
        if hv.dim() != self.dim || hv.repr() != self.repr {
            return Err(Error::Shape(format!(
                "codebook {} holds {}-dim {} vectors, got {}-dim {}",
                self.name,
                self.dim,
                self.repr,
                hv.dim(),
                hv.repr()
            )));
        }
        if let Some(&i) = self.index.get(symbol) {
            self.vectors[i] = hv;
            return Ok(&self.vectors[i]);
        }
        self.push(symbol, hv)
    }

    fn push(&mut self, symbol: &str, hv: HyperVector) -> Result<&HyperVector> {
        self.index.insert(symbol.to_string(), self.vectors.len());
        self.symbols.push(symbol.to_string());
        self.vectors.push(hv);
        Ok(self.vectors.last().expect("just pushed"))
    }

    pub fn get(&self, symbol: &str) -> Result<&HyperVector> {
        self.index
            .get(symbol)
            .map(|&i| &self.vectors[i])
            .ok_or_else(|| Error::MissingItem(format!("{symbol:?} not in codebook {}", self.name)))
    }

    pub fn position(&self, symbol: &str) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.index.contains_key(symbol)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn repr(&self) -> Repr {
        self.repr
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn vectors(&self) -> &[HyperVector] {
        &self.vectors
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &HyperVector)> {
        self.symbols.iter().map(String::as_str).zip(&self.vectors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regenerates_identically() {
        let a = Codebook::with_symbols("im", 11, 512, Repr::Binary, ["x", "y", "z"]).unwrap();
        let b = Codebook::with_symbols("im", 11, 512, Repr::Binary, ["z", "y", "x"]).unwrap();
        for s in ["x", "y", "z"] {
            assert_eq!(a.get(s).unwrap(), b.get(s).unwrap());
        }
        assert_eq!(a.symbols(), ["x", "y", "z"]);
    }

    #[test]
    fn missing_symbol_errors() {
        let a = Codebook::with_symbols("im", 1, 64, Repr::Binary, ["x"]).unwrap();
        assert!(matches!(a.get("q"), Err(Error::MissingItem(_))));
    }

    #[test]
    fn insert_vector_checks_shape() {
        let mut a = Codebook::new("im", 1, 64, Repr::Binary).unwrap();
        let wrong = random_hv("o", "v", 1, 64, Repr::Bipolar).unwrap();
        assert!(a.insert_vector("v", wrong).is_err());
    }
}
