//! Keyed deterministic random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 stream whose key
//! is the SHA-256 digest of a domain tag, a list of name parts and a 64-bit
//! seed. Streams for different keys are independent, so generation order never
//! affects the values.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Derives a stream keyed by `(domain, parts, seed)`.
pub fn keyed_rng(domain: &str, parts: &[&[u8]], seed: u64) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    absorb(&mut hasher, domain.as_bytes());
    for part in parts {
        absorb(&mut hasher, part);
    }
    hasher.update(seed.to_le_bytes());
    let key: [u8; 32] = hasher.finalize().into();
    ChaCha8Rng::from_seed(key)
}

// Length prefixes keep ("ab","c") and ("a","bc") apart.
fn absorb(hasher: &mut Sha256, bytes: &[u8]) {
    hasher.update((bytes.len() as u64).to_le_bytes());
    hasher.update(bytes);
}

/// Derives a child seed from a parent seed and a label.
pub fn split_seed(seed: u64, label: &str, index: u64) -> u64 {
    let mut rng = keyed_rng("split", &[label.as_bytes(), &index.to_le_bytes()], seed);
    rng.next_u64()
}

/// Fills `dim` random bits, packed LSB-first into words, tail bits cleared.
pub fn random_words(rng: &mut impl RngCore, dim: usize) -> Vec<u64> {
    let mut words: Vec<u64> = (0..dim.div_ceil(64)).map(|_| rng.next_u64()).collect();
    clear_tail(&mut words, dim);
    words
}

pub(crate) fn clear_tail(words: &mut [u64], dim: usize) {
    let rem = dim % 64;
    if rem != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

/// Deterministic tie-break bit stream: bit `i` is a pure function of `(seed, i)`.
pub struct TieBits {
    words: Vec<u64>,
}

impl TieBits {
    pub fn new(seed: u64, dim: usize) -> Self {
        let mut rng = keyed_rng("tie-break", &[], seed);
        TieBits {
            words: random_words(&mut rng, dim),
        }
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_key_same_stream() {
        let a = random_words(&mut keyed_rng("x", &[b"a"], 3), 200);
        let b = random_words(&mut keyed_rng("x", &[b"a"], 3), 200);
        assert_eq!(a, b);
        let c = random_words(&mut keyed_rng("x", &[b"b"], 3), 200);
        assert_ne!(a, c);
    }

    #[test]
    fn parts_are_length_prefixed() {
        let a = keyed_rng("x", &[b"ab", b"c"], 0).next_u64();
        let b = keyed_rng("x", &[b"a", b"bc"], 0).next_u64();
        assert_ne!(a, b);
    }

    #[test]
    fn tail_is_cleared() {
        let w = random_words(&mut keyed_rng("x", &[], 9), 70);
        assert_eq!(w.len(), 2);
        assert_eq!(w[1] >> 6, 0);
    }
}
