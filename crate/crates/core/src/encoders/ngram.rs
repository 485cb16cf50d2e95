use crate::error::{Error, Result};
use crate::hv::{bind, bundle, permute, Codebook, HyperVector};

/// Binds one n-gram: `rho^0(s_0) * rho^1(s_1) * ... * rho^(n-1)(s_(n-1))`.
pub fn bind_gram<S: AsRef<str>>(codebook: &Codebook, gram: &[S]) -> Result<HyperVector> {
    let mut out: Option<HyperVector> = None;
    for (k, s) in gram.iter().enumerate() {
        let v = permute(codebook.get(s.as_ref())?, k as i64);
        out = Some(match out {
            None => v,
            Some(acc) => bind(&acc, &v)?,
        });
    }
    out.ok_or_else(|| Error::InvalidInput("empty n-gram".into()))
}

/// Bundles every length-`n` window of `sequence`; ties use the codebook seed.
/// A sequence of exactly `n` symbols returns its bound n-gram unbundled.
pub fn ngram_encode<S: AsRef<str>>(codebook: &Codebook, sequence: &[S], n: usize) -> Result<HyperVector> {
    if n == 0 {
        return Err(Error::InvalidInput("n-gram size must be >= 1".into()));
    }
    if sequence.len() < n {
        return Err(Error::InvalidInput(format!(
            "sequence of {} symbols is shorter than n = {n}",
            sequence.len()
        )));
    }
    let grams = sequence
        .windows(n)
        .map(|w| bind_gram(codebook, w))
        .collect::<Result<Vec<_>>>()?;
    if grams.len() == 1 {
        return Ok(grams.into_iter().next().expect("one gram"));
    }
    Ok(bundle(&grams, codebook.seed())?.binarized)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hv::{similarity, Metric, Repr};

    fn letters(dim: usize) -> Codebook {
        Codebook::with_symbols("letters", 2, dim, Repr::Binary, ["a", "b", "d", "g", "o"]).unwrap()
    }

    fn chars(s: &str) -> Vec<String> {
        s.chars().map(String::from).collect()
    }

    #[test]
    fn good_as_single_gram() {
        let cb = letters(1000);
        let x = |s: &str| cb.get(s).unwrap().clone();
        let expect = bind(
            &bind(&bind(&x("g"), &permute(&x("o"), 1)).unwrap(), &permute(&x("o"), 2)).unwrap(),
            &permute(&x("d"), 3),
        )
        .unwrap();
        assert_eq!(ngram_encode(&cb, &chars("good"), 4).unwrap(), expect);
    }

    #[test]
    fn unigram_of_one_symbol() {
        let cb = letters(128);
        assert_eq!(ngram_encode(&cb, &["a"], 1).unwrap(), *cb.get("a").unwrap());
    }

    #[test]
    fn order_sensitive() {
        let cb = letters(10_000);
        let ab = ngram_encode(&cb, &chars("ab"), 2).unwrap();
        let ba = ngram_encode(&cb, &chars("ba"), 2).unwrap();
        let h = similarity(&ab, &ba, Metric::NormalizedHamming).unwrap().value;
        assert!((h - 0.5).abs() < 0.02, "{h}");
    }

    #[test]
    fn errors() {
        let cb = letters(64);
        assert!(matches!(ngram_encode(&cb, &["z"], 1), Err(Error::MissingItem(_))));
        assert!(ngram_encode(&cb, &["a"], 2).is_err());
        assert!(ngram_encode(&cb, &["a"], 0).is_err());
    }
}
