//! Hypervectors and the core VSA algebra.
//!
//! A [`HyperVector`] holds `dim` elements in one of three representations:
//!
//! - `Binary`: elements in {0, 1}, packed one bit per element.
//! - `Bipolar`: elements in {-1, +1}, packed with bit 1 = +1 and bit 0 = -1.
//! - `IntAccum(w)`: signed integers that fit a `w`-bit two's-complement range.
//!
//! Binary and Bipolar share storage, so converting between them is free and
//! exact. Binding is XOR on Binary and elementwise product on Bipolar. The two
//! bindings are not the same bit operation under the 0 <-> -1 view (product is
//! XNOR on the stored bits), so a pipeline should stay in one representation.

pub mod codebook;
pub mod io;
pub mod ops;
pub mod rng;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use codebook::Codebook;
pub use ops::{
    bind, bundle, hamming, inject_noise, permute, rank_score, similarity, unbind, Bundle,
};

/// Dimension used when a caller does not configure one.
pub const DEFAULT_DIM: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Repr {
    Binary,
    Bipolar,
    /// Signed integer accumulator of the given bit width (2..=64).
    IntAccum(u8),
}

impl Repr {
    pub fn is_bits(self) -> bool {
        matches!(self, Repr::Binary | Repr::Bipolar)
    }
}

impl fmt::Display for Repr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Repr::Binary => write!(f, "binary"),
            Repr::Bipolar => write!(f, "bipolar"),
            Repr::IntAccum(w) => write!(f, "int{w}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    NormalizedHamming,
    Cosine,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityScore {
    pub metric: Metric,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Data {
    Bits(Vec<u64>),
    Ints(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperVector {
    dim: usize,
    repr: Repr,
    data: Data,
}

/// Smallest two's-complement width holding every value in `[-m, m]`.
pub fn width_for_magnitude(m: u64) -> u8 {
    let w = 65 - m.leading_zeros() as u8;
    w.clamp(2, 64)
}

fn int_range(width: u8) -> (i64, i64) {
    if width >= 64 {
        (i64::MIN, i64::MAX)
    } else {
        let half = 1i64 << (width - 1);
        (-half, half - 1)
    }
}

impl HyperVector {
    /// Builds a bit-backed vector from packed words (LSB-first).
    pub(crate) fn from_words(dim: usize, repr: Repr, mut words: Vec<u64>) -> Self {
        debug_assert!(repr.is_bits());
        debug_assert_eq!(words.len(), dim.div_ceil(64));
        rng::clear_tail(&mut words, dim);
        HyperVector {
            dim,
            repr,
            data: Data::Bits(words),
        }
    }

    pub(crate) fn from_ints_unchecked(values: Vec<i64>, width: u8) -> Self {
        HyperVector {
            dim: values.len(),
            repr: Repr::IntAccum(width),
            data: Data::Ints(values),
        }
    }

    /// All-zero (Binary), all-minus-one (Bipolar) or all-zero (IntAccum) vector.
    pub fn zeros(dim: usize, repr: Repr) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(match repr {
            Repr::Binary | Repr::Bipolar => {
                Self::from_words(dim, repr, vec![0; dim.div_ceil(64)])
            }
            Repr::IntAccum(w) => {
                check_width(w)?;
                Self::from_ints_unchecked(vec![0; dim], w)
            }
        })
    }

    pub fn from_bools(bits: &[bool], repr: Repr) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if !repr.is_bits() {
            return Err(Error::InvalidInput(format!(
                "from_bools needs a bit representation, got {repr}"
            )));
        }
        let mut words = vec![0u64; bits.len().div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(Self::from_words(bits.len(), repr, words))
    }

    /// Parses a string of `0`/`1` characters, element 0 first.
    pub fn parse_bits(s: &str, repr: Repr) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '_')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidInput(format!("bad bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bools(&bits, repr)
    }

    pub fn from_bipolar(values: &[i64]) -> Result<Self> {
        let bits = values
            .iter()
            .map(|&v| match v {
                1 => Ok(true),
                -1 => Ok(false),
                other => Err(Error::InvalidInput(format!("bipolar element {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bools(&bits, Repr::Bipolar)
    }

    pub fn from_binary(values: &[i64]) -> Result<Self> {
        let bits = values
            .iter()
            .map(|&v| match v {
                1 => Ok(true),
                0 => Ok(false),
                other => Err(Error::InvalidInput(format!("binary element {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bools(&bits, Repr::Binary)
    }

    /// Integer accumulator; every value must fit the signed `width`-bit range.
    pub fn from_ints(values: Vec<i64>, width: u8) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        check_width(width)?;
        let (lo, hi) = int_range(width);
        if let Some(v) = values.iter().find(|v| **v < lo || **v > hi) {
            return Err(Error::InvalidInput(format!(
                "value {v} does not fit {width}-bit accumulator"
            )));
        }
        Ok(Self::from_ints_unchecked(values, width))
    }

    /// Accumulator with the narrowest width that holds every value.
    pub fn from_ints_fitted(values: Vec<i64>) -> Result<Self> {
        let m = values.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
        Self::from_ints(values, width_for_magnitude(m))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn repr(&self) -> Repr {
        self.repr
    }

    pub(crate) fn words(&self) -> Option<&[u64]> {
        match &self.data {
            Data::Bits(w) => Some(w),
            Data::Ints(_) => None,
        }
    }

    pub(crate) fn ints(&self) -> Option<&[i64]> {
        match &self.data {
            Data::Ints(v) => Some(v),
            Data::Bits(_) => None,
        }
    }

    /// Stored bit at `i` for bit representations.
    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        match &self.data {
            Data::Bits(w) => (w[i / 64] >> (i % 64)) & 1 == 1,
            Data::Ints(v) => v[i] > 0,
        }
    }

    /// Numeric value of element `i` in this vector's representation.
    #[inline]
    pub fn get(&self, i: usize) -> i64 {
        match (&self.data, self.repr) {
            (Data::Bits(_), Repr::Binary) => self.bit(i) as i64,
            (Data::Bits(_), _) => {
                if self.bit(i) {
                    1
                } else {
                    -1
                }
            }
            (Data::Ints(v), _) => v[i],
        }
    }

    pub fn values(&self) -> Vec<i64> {
        (0..self.dim).map(|i| self.get(i)).collect()
    }

    /// Values under the bipolar view (bit reprs) or the raw integers.
    pub(crate) fn signed_values(&self) -> Vec<i64> {
        match &self.data {
            Data::Bits(_) => (0..self.dim)
                .map(|i| if self.bit(i) { 1 } else { -1 })
                .collect(),
            Data::Ints(v) => v.clone(),
        }
    }

    pub fn count_ones(&self) -> usize {
        match &self.data {
            Data::Bits(w) => w.iter().map(|x| x.count_ones() as usize).sum(),
            Data::Ints(v) => v.iter().filter(|x| **x > 0).count(),
        }
    }

    /// Reinterprets a bit vector as Bipolar (0 -> -1, 1 -> +1).
    pub fn to_bipolar(&self) -> Result<Self> {
        self.with_bit_repr(Repr::Bipolar)
    }

    /// Reinterprets a bit vector as Binary (-1 -> 0, +1 -> 1).
    pub fn to_binary(&self) -> Result<Self> {
        self.with_bit_repr(Repr::Binary)
    }

    fn with_bit_repr(&self, repr: Repr) -> Result<Self> {
        match &self.data {
            Data::Bits(w) => Ok(HyperVector {
                dim: self.dim,
                repr,
                data: Data::Bits(w.clone()),
            }),
            Data::Ints(_) => Err(Error::InvalidInput(format!(
                "cannot view {} as {repr}; binarize first",
                self.repr
            ))),
        }
    }

    /// Elementwise complement: bit flip for bit reprs, negation for integers.
    pub fn complement(&self) -> Self {
        match &self.data {
            Data::Bits(w) => {
                Self::from_words(self.dim, self.repr, w.iter().map(|x| !x).collect())
            }
            Data::Ints(v) => HyperVector {
                dim: self.dim,
                repr: self.repr,
                data: Data::Ints(v.iter().map(|x| x.saturating_neg()).collect()),
            },
        }
    }

    /// `0`/`1` string of the stored bits, element 0 first.
    pub fn to_bit_string(&self) -> String {
        (0..self.dim)
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }
}

fn check_width(w: u8) -> Result<()> {
    if (2..=64).contains(&w) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "accumulator width {w} outside 2..=64"
        )))
    }
}

/// Random hypervector keyed by `(codebook_name, symbol, seed)`.
///
/// Elements are i.i.d. uniform over the representation's alphabet. For
/// IntAccum the alphabet is {-1, +1} stored at the requested width. The bit
/// stream does not depend on `dim` beyond its length, so a shorter vector is
/// a prefix of a longer one with the same key.
pub fn random_hv(codebook_name: &str, symbol: &str, seed: u64, dim: usize, repr: Repr) -> Result<HyperVector> {
    if dim == 0 {
        return Err(Error::InvalidDimension(dim));
    }
    let mut rng = rng::keyed_rng(
        "item",
        &[codebook_name.as_bytes(), symbol.as_bytes()],
        seed,
    );
    let words = rng::random_words(&mut rng, dim);
    let bits = HyperVector::from_words(dim, Repr::Binary, words);
    match repr {
        Repr::Binary | Repr::Bipolar => bits.with_bit_repr(repr),
        Repr::IntAccum(w) => {
            check_width(w)?;
            Ok(HyperVector::from_ints_unchecked(bits.signed_values(), w))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_hv_is_deterministic() {
        let a = random_hv("im", "a", 7, 8, Repr::Binary).unwrap();
        let b = random_hv("im", "a", 7, 8, Repr::Binary).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 8);
    }

    #[test]
    fn zero_dim_rejected() {
        assert!(matches!(
            random_hv("im", "a", 7, 0, Repr::Binary),
            Err(Error::InvalidDimension(0))
        ));
        assert!(HyperVector::zeros(0, Repr::Binary).is_err());
    }

    #[test]
    fn binary_bipolar_round_trip() {
        let a = HyperVector::parse_bits("0110_1001", Repr::Binary).unwrap();
        let b = a.to_bipolar().unwrap();
        assert_eq!(b.values(), vec![-1, 1, 1, -1, 1, -1, -1, 1]);
        assert_eq!(b.to_binary().unwrap(), a);
    }

    #[test]
    fn accumulator_range_checked() {
        assert!(HyperVector::from_ints(vec![7, -8], 4).is_ok());
        assert!(HyperVector::from_ints(vec![8], 4).is_err());
        assert!(HyperVector::from_ints(vec![1], 1).is_err());
        let h = HyperVector::from_ints_fitted(vec![3, -3, 0]).unwrap();
        assert_eq!(h.repr(), Repr::IntAccum(3));
    }

    #[test]
    fn width_for_magnitude_covers_range() {
        for m in [0u64, 1, 2, 3, 4, 7, 8, 255, 256, 1 << 40] {
            let (lo, hi) = int_range(width_for_magnitude(m));
            assert!(lo <= -(m as i64) && hi >= m as i64, "m={m}");
        }
    }

    #[test]
    fn bipolar_parsing_rejects_zero() {
        assert!(HyperVector::from_bipolar(&[1, 0, -1]).is_err());
        assert!(HyperVector::from_binary(&[1, 0, 2]).is_err());
    }
}
