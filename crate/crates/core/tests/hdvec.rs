use proptest::prelude::*;

use vsa_core::hv::{
    bind, bundle, hamming, inject_noise, permute, random_hv, similarity, unbind, HyperVector, Metric, Repr,
};

fn repr() -> impl Strategy<Value = Repr> {
    prop_oneof![Just(Repr::Binary), Just(Repr::Bipolar)]
}

fn hv(sym: &str, seed: u64, dim: usize, r: Repr) -> HyperVector {
    random_hv("props", sym, seed, dim, r).unwrap()
}

fn nh(a: &HyperVector, b: &HyperVector) -> f64 {
    hamming(a, b).unwrap() as f64 / a.dim() as f64
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn unbind_inverts_bind(dim in 1usize..2000, seed: u64, r in repr()) {
        let (a, b) = (hv("a", seed, dim, r), hv("b", seed, dim, r));
        prop_assert_eq!(unbind(&bind(&a, &b).unwrap(), &b).unwrap(), a);
    }

    #[test]
    fn bind_preserves_distance(dim in 1usize..2000, seed: u64, r in repr()) {
        let (a, b, c) = (hv("a", seed, dim, r), hv("b", seed, dim, r), hv("c", seed, dim, r));
        prop_assert_eq!(
            hamming(&bind(&a, &c).unwrap(), &bind(&b, &c).unwrap()).unwrap(),
            hamming(&a, &b).unwrap()
        );
    }

    #[test]
    fn bind_commutes(dim in 1usize..2000, seed: u64, r in repr()) {
        let (a, b) = (hv("a", seed, dim, r), hv("b", seed, dim, r));
        prop_assert_eq!(bind(&a, &b).unwrap(), bind(&b, &a).unwrap());
    }

    #[test]
    fn permutation_is_isometry_and_cyclic(dim in 1usize..2000, seed: u64, k in -5000i64..5000, r in repr()) {
        let (a, b) = (hv("a", seed, dim, r), hv("b", seed, dim, r));
        prop_assert_eq!(hamming(&permute(&a, k), &permute(&b, k)).unwrap(), hamming(&a, &b).unwrap());
        prop_assert_eq!(permute(&permute(&a, dim as i64 - 1), 1), a.clone());
        prop_assert_eq!(permute(&permute(&a, k), -k), a.clone());
        prop_assert_eq!(permute(&a, k + dim as i64), permute(&a, k));
    }

    #[test]
    fn permutation_distributes_over_bind(dim in 1usize..2000, seed: u64, k in -3000i64..3000, r in repr()) {
        let (a, b) = (hv("a", seed, dim, r), hv("b", seed, dim, r));
        prop_assert_eq!(
            permute(&bind(&a, &b).unwrap(), k),
            bind(&permute(&a, k), &permute(&b, k)).unwrap()
        );
    }

    #[test]
    fn two_of_three_majority(dim in 1usize..2000, seed: u64, tie: u64, r in repr()) {
        let (a, b) = (hv("a", seed, dim, r), hv("b", seed, dim, r));
        prop_assert_eq!(bundle(&[a.clone(), a.clone(), b], tie).unwrap().binarized, a);
    }

    #[test]
    fn similarity_identities(dim in 1usize..2000, seed: u64) {
        let a = hv("a", seed, dim, Repr::Bipolar);
        let na = inject_noise(&a, 1.0, 0).unwrap();
        prop_assert_eq!(similarity(&a, &a, Metric::NormalizedHamming).unwrap().value, 0.0);
        prop_assert_eq!(similarity(&a, &na, Metric::Cosine).unwrap().value, -1.0);
        prop_assert_eq!(similarity(&a, &a, Metric::Dot).unwrap().value, dim as f64);
    }

    #[test]
    fn noise_is_seeded_and_shape_preserving(dim in 1usize..2000, seed: u64, p in 0.0f64..=1.0, r in repr()) {
        let a = hv("a", seed, dim, r);
        let n = inject_noise(&a, p, seed).unwrap();
        prop_assert_eq!(n.dim(), dim);
        prop_assert_eq!(n.repr(), r);
        prop_assert_eq!(inject_noise(&a, p, seed).unwrap(), n);
    }
}

#[test]
fn distinct_symbols_are_quasi_orthogonal() {
    let d = 10_000;
    let xs: Vec<f64> = (0..1000)
        .map(|i| nh(&hv(&format!("x{i}"), 4, d, Repr::Binary), &hv(&format!("y{i}"), 4, d, Repr::Binary)))
        .collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
    assert!(xs.iter().all(|x| (x - 0.5).abs() < 0.03), "max deviation beyond 6 sigma");
}

#[test]
fn bundle_of_three_is_a_quarter_from_each() {
    let d = 10_000;
    let mut total = 0.0;
    for t in 0..50u64 {
        let v: Vec<HyperVector> = ["a", "b", "c"].iter().map(|s| hv(s, t, d, Repr::Binary)).collect();
        let b = bundle(&v, t).unwrap().binarized;
        for x in &v {
            let h = nh(&b, x);
            assert!((h - 0.25).abs() < 0.02, "trial {t}: {h}");
            total += h;
        }
        let eps = hv("eps", t, d, Repr::Binary);
        assert!(nh(&b, &eps) > nh(&b, &v[0]) + 0.15);
    }
    assert!((total / 150.0 - 0.25).abs() < 0.005);
}

#[test]
fn permuted_vector_is_quasi_orthogonal() {
    for t in 0..20u64 {
        let a = hv("a", t, 10_000, Repr::Binary);
        let h = nh(&a, &permute(&a, 1));
        assert!((h - 0.5).abs() < 0.02, "{h}");
    }
}

#[test]
fn noisy_unbind_recovers_original() {
    let d = 10_000;
    for t in 0..20u64 {
        let (a, b, eps) = (hv("a", t, d, Repr::Binary), hv("b", t, d, Repr::Binary), hv("e", t, d, Repr::Binary));
        let x = inject_noise(&bind(&a, &b).unwrap(), 0.1, t).unwrap();
        let r = unbind(&x, &b).unwrap();
        // Noise commutes through XOR, so the flipped fraction carries over.
        assert_eq!(hamming(&r, &a).unwrap(), hamming(&x, &bind(&a, &b).unwrap()).unwrap());
        assert!(nh(&r, &a) <= 0.11);
        assert!(nh(&r, &eps) > 0.45);
    }
}

#[test]
fn noise_rate_concentrates() {
    let a = hv("a", 1, 10_000, Repr::Bipolar);
    for seed in 0..20u64 {
        let f = nh(&a, &inject_noise(&a, 0.1, seed).unwrap());
        assert!((f - 0.1).abs() < 0.01, "{f}");
    }
}
