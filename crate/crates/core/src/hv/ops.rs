//! Binding, bundling, permutation, similarity and noise.

use rand::Rng;

use super::rng::{keyed_rng, TieBits};
use super::{width_for_magnitude, Data, HyperVector, Metric, Repr, SimilarityScore};
use crate::error::{Error, Result};

fn check_same_dim(a: &HyperVector, b: &HyperVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Shape(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

fn bit_words<'a>(a: &'a HyperVector, op: &str) -> Result<&'a [u64]> {
    a.words().ok_or_else(|| {
        Error::Shape(format!("{op} requires Binary or Bipolar, got {}", a.repr()))
    })
}

/// XOR for Binary, elementwise product for Bipolar.
pub fn bind(a: &HyperVector, b: &HyperVector) -> Result<HyperVector> {
    check_same_dim(a, b)?;
    if a.repr() != b.repr() {
        return Err(Error::Shape(format!(
            "representation mismatch: {} vs {}",
            a.repr(),
            b.repr()
        )));
    }
    let (wa, wb) = (bit_words(a, "bind")?, bit_words(b, "bind")?);
    let words = match a.repr() {
        Repr::Binary => wa.iter().zip(wb).map(|(x, y)| x ^ y).collect(),
        // +1*+1 = +1 and -1*-1 = +1: equal bits give 1.
        _ => wa.iter().zip(wb).map(|(x, y)| !(x ^ y)).collect(),
    };
    Ok(HyperVector::from_words(a.dim(), a.repr(), words))
}

/// Inverse of [`bind`]. Both bindings are self-inverse, so this is `bind`.
pub fn unbind(x: &HyperVector, b: &HyperVector) -> Result<HyperVector> {
    bind(x, b)
}

/// Number of positions whose stored bits differ.
pub fn hamming(a: &HyperVector, b: &HyperVector) -> Result<usize> {
    check_same_dim(a, b)?;
    let (wa, wb) = (bit_words(a, "hamming")?, bit_words(b, "hamming")?);
    Ok(wa
        .iter()
        .zip(wb)
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum())
}

/// Result of [`bundle`]: the exact sum and its majority vote.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle {
    pub accum: HyperVector,
    pub binarized: HyperVector,
}

/// Superposes `inputs`.
///
/// The accumulator is the elementwise sum under the bipolar view (integers
/// are summed as-is). The binarized vector is the elementwise majority:
/// positive sums give 1/+1, negative sums 0/-1, and zero sums take the bit
/// at that position from the tie stream keyed by `tie_break_seed`. The
/// binarized output keeps the inputs' bit representation; integer inputs
/// binarize to Bipolar.
pub fn bundle(inputs: &[HyperVector], tie_break_seed: u64) -> Result<Bundle> {
    let first = inputs.first().ok_or(Error::EmptyBundle)?;
    let dim = first.dim();
    for v in &inputs[1..] {
        check_same_dim(first, v)?;
        if v.repr().is_bits() != first.repr().is_bits() {
            return Err(Error::Shape(format!(
                "cannot bundle {} with {}",
                first.repr(),
                v.repr()
            )));
        }
    }
    let mut sums = vec![0i64; dim];
    for v in inputs {
        accumulate(&mut sums, v, 1);
    }
    let out_repr = match first.repr() {
        Repr::IntAccum(_) => Repr::Bipolar,
        r => r,
    };
    let binarized = binarize(&sums, tie_break_seed, out_repr)?;
    let magnitude = match first.repr() {
        Repr::IntAccum(_) => sums.iter().map(|s| s.unsigned_abs()).max().unwrap_or(0),
        _ => inputs.len() as u64,
    };
    let accum = HyperVector::from_ints_unchecked(sums, width_for_magnitude(magnitude));
    Ok(Bundle { accum, binarized })
}

/// Adds `weight * v` (bipolar view for bit vectors) into `sums`.
pub(crate) fn accumulate(sums: &mut [i64], v: &HyperVector, weight: i64) {
    match &v.data {
        Data::Bits(words) => {
            for (i, s) in sums.iter_mut().enumerate() {
                let bit = (words[i / 64] >> (i % 64)) & 1;
                *s += if bit == 1 { weight } else { -weight };
            }
        }
        Data::Ints(values) => {
            for (s, x) in sums.iter_mut().zip(values) {
                *s += weight * x;
            }
        }
    }
}

/// Majority-sign of an accumulator with seeded tie-breaking for zeros.
pub fn binarize(sums: &[i64], tie_break_seed: u64, repr: Repr) -> Result<HyperVector> {
    if sums.is_empty() {
        return Err(Error::InvalidDimension(0));
    }
    if !repr.is_bits() {
        return Err(Error::InvalidInput(format!(
            "binarize target must be a bit representation, got {repr}"
        )));
    }
    let ties = sums.contains(&0)
        .then(|| TieBits::new(tie_break_seed, sums.len()));
    let mut words = vec![0u64; sums.len().div_ceil(64)];
    for (i, s) in sums.iter().enumerate() {
        let bit = match s.signum() {
            1 => true,
            -1 => false,
            _ => ties.as_ref().is_some_and(|t| t.bit(i)),
        };
        if bit {
            words[i / 64] |= 1 << (i % 64);
        }
    }
    Ok(HyperVector::from_words(sums.len(), repr, words))
}

/// Cyclic rotation: element `i` moves to `(i + k) mod D`. Negative `k`
/// rotates the other way.
pub fn permute(a: &HyperVector, k: i64) -> HyperVector {
    let dim = a.dim();
    let shift = k.rem_euclid(dim as i64) as usize;
    if shift == 0 {
        return a.clone();
    }
    match &a.data {
        Data::Bits(words) => {
            let mut out = vec![0u64; words.len()];
            for i in 0..dim {
                if (words[i / 64] >> (i % 64)) & 1 == 1 {
                    let j = (i + shift) % dim;
                    out[j / 64] |= 1 << (j % 64);
                }
            }
            HyperVector::from_words(dim, a.repr(), out)
        }
        Data::Ints(values) => {
            let mut out = vec![0i64; dim];
            for (i, v) in values.iter().enumerate() {
                out[(i + shift) % dim] = *v;
            }
            HyperVector::from_ints_unchecked(out, match a.repr() {
                Repr::IntAccum(w) => w,
                _ => 64,
            })
        }
    }
}

/// Similarity of `a` and `b` under `metric`, evaluated on each vector's own
/// element values (Binary elements are 0/1).
pub fn similarity(a: &HyperVector, b: &HyperVector, metric: Metric) -> Result<SimilarityScore> {
    check_same_dim(a, b)?;
    let value = match metric {
        Metric::NormalizedHamming => hamming(a, b)? as f64 / a.dim() as f64,
        Metric::Dot => dot_values(a, b) as f64,
        Metric::Cosine => {
            let na = dot_values(a, a) as f64;
            let nb = dot_values(b, b) as f64;
            if na == 0.0 || nb == 0.0 {
                return Err(Error::UndefinedSimilarity(
                    "cosine of a zero-norm vector".into(),
                ));
            }
            (dot_values(a, b) as f64 / (na * nb).sqrt()).clamp(-1.0, 1.0)
        }
    };
    Ok(SimilarityScore { metric, value })
}

fn dot_values(a: &HyperVector, b: &HyperVector) -> i128 {
    match (a.repr(), b.repr(), a.words(), b.words()) {
        (Repr::Bipolar, Repr::Bipolar, Some(wa), Some(wb)) => {
            let h: i128 = wa
                .iter()
                .zip(wb)
                .map(|(x, y)| (x ^ y).count_ones() as i128)
                .sum();
            a.dim() as i128 - 2 * h
        }
        (Repr::Binary, Repr::Binary, Some(wa), Some(wb)) => wa
            .iter()
            .zip(wb)
            .map(|(x, y)| (x & y).count_ones() as i128)
            .sum(),
        _ => (0..a.dim())
            .map(|i| a.get(i) as i128 * b.get(i) as i128)
            .sum(),
    }
}

/// Higher-is-more-similar score used by every ranking operation.
///
/// Bit vectors are compared under the bipolar view: NormalizedHamming gives
/// `1 - h`, Cosine gives the bipolar cosine `1 - 2h` and Dot the bipolar dot
/// product. Integer vectors use their values directly.
pub fn rank_score(a: &HyperVector, b: &HyperVector, metric: Metric) -> Result<f64> {
    check_same_dim(a, b)?;
    if a.repr().is_bits() && b.repr().is_bits() {
        let h = hamming(a, b)? as f64;
        let d = a.dim() as f64;
        return Ok(match metric {
            Metric::NormalizedHamming => 1.0 - h / d,
            Metric::Cosine => 1.0 - 2.0 * h / d,
            Metric::Dot => d - 2.0 * h,
        });
    }
    let av = a.signed_values();
    let bv = b.signed_values();
    let dot: f64 = av.iter().zip(&bv).map(|(x, y)| (*x as f64) * (*y as f64)).sum();
    match metric {
        Metric::Dot => Ok(dot),
        Metric::Cosine | Metric::NormalizedHamming => {
            let na: f64 = av.iter().map(|x| (*x as f64).powi(2)).sum::<f64>().sqrt();
            let nb: f64 = bv.iter().map(|x| (*x as f64).powi(2)).sum::<f64>().sqrt();
            if na == 0.0 || nb == 0.0 {
                return Err(Error::UndefinedSimilarity(
                    "cosine of a zero-norm vector".into(),
                ));
            }
            let c = dot / (na * nb);
            Ok(if metric == Metric::Cosine { c } else { (1.0 + c) / 2.0 })
        }
    }
}

/// Flips each element independently with probability `p`.
///
/// Bit elements are complemented; integer elements are negated.
pub fn inject_noise(a: &HyperVector, p: f64, seed: u64) -> Result<HyperVector> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidProbability(p));
    }
    if p == 0.0 {
        return Ok(a.clone());
    }
    let mut rng = keyed_rng("noise", &[], seed);
    match &a.data {
        Data::Bits(words) => {
            let mut out = words.clone();
            for i in 0..a.dim() {
                if rng.random::<f64>() < p {
                    out[i / 64] ^= 1 << (i % 64);
                }
            }
            Ok(HyperVector::from_words(a.dim(), a.repr(), out))
        }
        Data::Ints(values) => {
            let out = values
                .iter()
                .map(|v| {
                    if rng.random::<f64>() < p {
                        v.saturating_neg()
                    } else {
                        *v
                    }
                })
                .collect();
            Ok(HyperVector {
                dim: a.dim(),
                repr: a.repr(),
                data: Data::Ints(out),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hv::random_hv;

    fn bits(s: &str) -> HyperVector {
        HyperVector::parse_bits(s, Repr::Binary).unwrap()
    }

    fn rand_bin(sym: &str, dim: usize) -> HyperVector {
        random_hv("t", sym, 1, dim, Repr::Binary).unwrap()
    }

    #[test]
    fn bind_is_xor() {
        let x = bind(&bits("01101001"), &bits("11001010")).unwrap();
        assert_eq!(x.to_bit_string(), "10100011");
    }

    #[test]
    fn self_bind_is_zero() {
        let a = rand_bin("a", 300);
        assert_eq!(bind(&a, &a).unwrap().count_ones(), 0);
    }

    #[test]
    fn bipolar_bind_is_product() {
        let a = HyperVector::from_bipolar(&[1, -1, 1, -1]).unwrap();
        let b = HyperVector::from_bipolar(&[1, 1, -1, -1]).unwrap();
        assert_eq!(bind(&a, &b).unwrap().values(), vec![1, -1, -1, 1]);
    }

    #[test]
    fn bind_shape_errors() {
        let a = rand_bin("a", 64);
        let b = rand_bin("b", 65);
        assert!(matches!(bind(&a, &b), Err(Error::Shape(_))));
        let c = a.to_bipolar().unwrap();
        assert!(matches!(bind(&a, &c), Err(Error::Shape(_))));
        let i = HyperVector::from_ints(vec![1; 64], 8).unwrap();
        assert!(matches!(bind(&i, &i), Err(Error::Shape(_))));
    }

    #[test]
    fn majority_of_two_identical_wins() {
        let a = rand_bin("a", 500);
        let b = rand_bin("b", 500);
        let out = bundle(&[a.clone(), a.clone(), b], 3).unwrap();
        assert_eq!(out.binarized, a);
        assert_eq!(out.accum.repr(), Repr::IntAccum(3));
    }

    #[test]
    fn empty_bundle_rejected() {
        assert!(matches!(bundle(&[], 0), Err(Error::EmptyBundle)));
    }

    #[test]
    fn ties_follow_seed() {
        let a = rand_bin("a", 1000);
        let b = a.complement();
        let x = bundle(&[a.clone(), b.clone()], 5).unwrap().binarized;
        let y = bundle(&[a.clone(), b.clone()], 5).unwrap().binarized;
        let z = bundle(&[a, b], 6).unwrap().binarized;
        assert_eq!(x, y);
        assert_ne!(x, z);
        // Every position tied, so the result is the tie stream itself.
        let ones = x.count_ones() as f64 / 1000.0;
        assert!((ones - 0.5).abs() < 0.08);
    }

    #[test]
    fn permute_rotates_right() {
        assert_eq!(permute(&bits("01100000"), 1).to_bit_string(), "00110000");
        assert_eq!(permute(&bits("01100000"), -1).to_bit_string(), "11000000");
        let a = rand_bin("a", 77);
        assert_eq!(permute(&permute(&a, 76), 1), a);
        assert_eq!(permute(&a, 77), a);
    }

    #[test]
    fn similarity_identities() {
        let a = rand_bin("a", 256);
        assert_eq!(similarity(&a, &a, Metric::NormalizedHamming).unwrap().value, 0.0);
        let p = a.to_bipolar().unwrap();
        let n = p.complement();
        assert_eq!(similarity(&p, &n, Metric::Cosine).unwrap().value, -1.0);
        assert_eq!(similarity(&p, &p, Metric::Dot).unwrap().value, 256.0);
    }

    #[test]
    fn cosine_zero_norm_errors() {
        let z = HyperVector::zeros(16, Repr::Binary).unwrap();
        assert!(matches!(
            similarity(&z, &z, Metric::Cosine),
            Err(Error::UndefinedSimilarity(_))
        ));
        let zi = HyperVector::zeros(16, Repr::IntAccum(8)).unwrap();
        assert!(similarity(&zi, &zi, Metric::Cosine).is_err());
    }

    #[test]
    fn hamming_needs_bits() {
        let i = HyperVector::from_ints(vec![1; 8], 4).unwrap();
        assert!(similarity(&i, &i, Metric::NormalizedHamming).is_err());
    }

    #[test]
    fn rank_score_orients_hamming() {
        let a = rand_bin("a", 1000);
        let b = rand_bin("b", 1000);
        let h = similarity(&a, &b, Metric::NormalizedHamming).unwrap().value;
        let r = rank_score(&a, &b, Metric::NormalizedHamming).unwrap();
        assert!((r - (1.0 - h)).abs() < 1e-12);
        assert_eq!(rank_score(&a, &a, Metric::Cosine).unwrap(), 1.0);
    }

    #[test]
    fn mixed_cosine_uses_values() {
        let acc = HyperVector::from_ints(vec![3, -1, 2, 0], 8).unwrap();
        let p = HyperVector::from_bipolar(&[1, -1, 1, 1]).unwrap();
        let c = similarity(&acc, &p, Metric::Cosine).unwrap().value;
        let expect = 6.0 / (14f64.sqrt() * 2.0);
        assert!((c - expect).abs() < 1e-12);
    }

    #[test]
    fn noise_extremes() {
        let a = rand_bin("a", 333);
        assert_eq!(inject_noise(&a, 0.0, 1).unwrap(), a);
        assert_eq!(inject_noise(&a, 1.0, 1).unwrap(), a.complement());
        assert!(matches!(inject_noise(&a, 1.5, 1), Err(Error::InvalidProbability(_))));
        assert!(inject_noise(&a, -0.1, 1).is_err());
        assert!(inject_noise(&a, f64::NAN, 1).is_err());
    }

    #[test]
    fn noise_rate_concentrates() {
        let a = rand_bin("a", 10_000);
        let n = inject_noise(&a, 0.1, 42).unwrap();
        let frac = hamming(&a, &n).unwrap() as f64 / 10_000.0;
        assert!((frac - 0.1).abs() <= 0.01, "{frac}");
    }

    #[test]
    fn noisy_unbind_stays_close() {
        let a = rand_bin("a", 10_000);
        let b = rand_bin("b", 10_000);
        let x = inject_noise(&bind(&a, &b).unwrap(), 0.1, 9).unwrap();
        let r = unbind(&x, &b).unwrap();
        let h = similarity(&r, &a, Metric::NormalizedHamming).unwrap().value;
        assert!(h <= 0.1 + 0.01, "{h}");
        // Noise commutes through XOR: the residual equals the flip pattern.
        assert_eq!(hamming(&r, &a).unwrap(), hamming(&x, &bind(&a, &b).unwrap()).unwrap());
    }
}
