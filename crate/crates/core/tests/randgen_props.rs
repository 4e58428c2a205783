use matineq::linalg::eigh;
use matineq::randgen::{
    random_gap_pair, random_hermitian, random_normal, random_pd, stream_seed, GapMode, GeneratorConfig, SplitMix64,
    Structure,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn same_seed_same_matrix(n in 1usize..=6, seed in any::<u64>()) {
        let g = GeneratorConfig::new(n, 0.5, 4.0, Structure::PositiveDefinite, seed).unwrap();
        prop_assert_eq!(random_pd(&g, seed).unwrap(), random_pd(&g, seed).unwrap());
        let g = GeneratorConfig::new(n, 0.5, 4.0, Structure::NormalComplex, seed).unwrap();
        prop_assert_eq!(random_normal(&g, seed).unwrap(), random_normal(&g, seed).unwrap());
    }

    #[test]
    fn spectrum_contained_with_endpoints(n in 1usize..=8, seed in any::<u64>(), m in 0.1f64..2.0, w in 0.0f64..5.0) {
        let big_m = m + w;
        let g = GeneratorConfig::new(n, m, big_m, Structure::PositiveDefinite, seed).unwrap();
        let s = eigh(&random_pd(&g, g.stream(0)).unwrap()).unwrap();
        let eps = 1e-10 * (1.0 + big_m);
        prop_assert!(s.min() >= m - eps && s.max() <= big_m + eps);
        if n >= 2 {
            prop_assert!((s.min() - m).abs() <= eps && (s.max() - big_m).abs() <= eps);
        }
    }

    #[test]
    fn indefinite_magnitudes_contained(n in 1usize..=6, seed in any::<u64>()) {
        let g = GeneratorConfig::new(n, 1.0, 3.0, Structure::HermitianIndefinite, seed).unwrap();
        let s = eigh(&random_hermitian(&g, seed).unwrap()).unwrap();
        prop_assert!(s.values.iter().all(|v| (1.0 - 1e-9..=3.0 + 1e-9).contains(&v.abs())));
    }

    #[test]
    fn gap_pairs_are_separated(n in 1usize..=6, seed in any::<u64>()) {
        let (a, b) = random_gap_pair(n, GapMode::AboveA, seed).unwrap();
        prop_assert!(eigh(&b).unwrap().min() - eigh(&a).unwrap().max() >= 1.0 - 1e-9);
        let (a, b) = random_gap_pair(n, GapMode::BelowA, seed).unwrap();
        prop_assert!(eigh(&a).unwrap().min() - eigh(&b).unwrap().max() >= 1.0 - 1e-9);
    }
}

#[test]
fn stream_first_draws_pass_chi_square() {
    const N: usize = 20_000;
    const BINS: usize = 20;
    for master in [0u64, 1, 20240001, u64::MAX] {
        let mut counts = [0usize; BINS];
        for i in 0..N as u64 {
            let u = SplitMix64::new(stream_seed(master, i)).next_f64();
            counts[(u * BINS as f64) as usize] += 1;
        }
        let expected = N as f64 / BINS as f64;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 19 degrees of freedom, 99.9% quantile is about 43.8
        assert!(chi2 < 43.8, "master {master}: chi2 = {chi2}");
    }
}

#[test]
fn uniform_draws_stay_in_range() {
    let mut rng = SplitMix64::new(9);
    for _ in 0..10_000 {
        let u = rng.next_f64();
        assert!((0.0..1.0).contains(&u));
        let v = rng.uniform(-2.0, 5.0);
        assert!((-2.0..5.0).contains(&v));
    }
}
