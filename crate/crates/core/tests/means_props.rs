use matineq::linalg::{loewner_leq, ComplexMatrix, HermitianMatrix};
use matineq::means::{mean_catalog, MatrixMean};
use matineq::randgen::{random_pd, GeneratorConfig, SplitMix64, Structure};
use proptest::prelude::*;

fn pd_pair(n: usize, seed: u64) -> (HermitianMatrix, HermitianMatrix) {
    let g = GeneratorConfig::new(n, 0.5, 4.0, Structure::PositiveDefinite, seed).unwrap();
    (random_pd(&g, seed).unwrap(), random_pd(&g, seed ^ 0xabcdef).unwrap())
}

fn rel_diff(x: &HermitianMatrix, y: &HermitianMatrix) -> f64 {
    (x.as_matrix() - y.as_matrix()).frobenius() / (1.0 + y.as_matrix().frobenius())
}

fn psd(n: usize, seed: u64) -> HermitianMatrix {
    let mut rng = SplitMix64::new(seed);
    let x = ComplexMatrix::from_fn(n, |_, _| rng.complex_gaussian());
    HermitianMatrix::from_matrix(&(&x * &x.adjoint()))
}

#[test]
fn identity_is_fixed() {
    for sigma in mean_catalog() {
        for n in 1..=5 {
            let id = HermitianMatrix::identity(n);
            let v = sigma.apply(&id, &id).unwrap();
            assert!(rel_diff(&v, &id) < 1e-10, "{}", sigma.name());
        }
    }
}

#[test]
fn representing_functions_are_normalized() {
    for sigma in mean_catalog() {
        assert!((sigma.representing_function().eval(1.0) - 1.0).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn positive_homogeneity(n in 1usize..=5, seed in any::<u64>(), k in 0usize..9) {
        let sigma = &mean_catalog()[k];
        let (a, b) = pd_pair(n, seed);
        let base = sigma.apply(&a, &b).unwrap();
        for c in [0.5, 2.0, 10.0] {
            let scaled = sigma.apply(&a.scale(c), &b.scale(c)).unwrap();
            prop_assert!(rel_diff(&scaled, &base.scale(c)) < 1e-9);
        }
    }

    #[test]
    fn congruence_equality(n in 1usize..=5, seed in any::<u64>(), k in 0usize..9) {
        let sigma = &mean_catalog()[k];
        let (a, b) = pd_pair(n, seed);
        let mut rng = SplitMix64::new(seed.rotate_left(13));
        // well conditioned invertible C
        let c = &ComplexMatrix::identity(n) + &ComplexMatrix::from_fn(n, |_, _| rng.complex_gaussian() * 0.2);
        let lhs = sigma.apply(&a, &b).unwrap().congruence(&c);
        let rhs = sigma.apply(&a.congruence(&c), &b.congruence(&c)).unwrap();
        prop_assert!(rel_diff(&lhs, &rhs) < 1e-8);
    }

    #[test]
    fn harmonic_geometric_arithmetic_ordering(n in 1usize..=6, seed in any::<u64>(), t in 0.0f64..=1.0) {
        let (a, b) = pd_pair(n, seed);
        let h = MatrixMean::harmonic(t).unwrap().apply(&a, &b).unwrap();
        let g = MatrixMean::geometric(t).unwrap().apply(&a, &b).unwrap();
        let ar = MatrixMean::arithmetic(t).unwrap().apply(&a, &b).unwrap();
        prop_assert!(loewner_leq(&h, &g, 1e-8).unwrap().pass);
        prop_assert!(loewner_leq(&g, &ar, 1e-8).unwrap().pass);
    }

    #[test]
    fn monotone_in_both_arguments(n in 1usize..=5, seed in any::<u64>(), k in 0usize..9) {
        let sigma = &mean_catalog()[k];
        let (a, b) = pd_pair(n, seed);
        let c = a.add(&psd(n, seed ^ 1));
        let d = b.add(&psd(n, seed ^ 2));
        let lo = sigma.apply(&a, &b).unwrap();
        let hi = sigma.apply(&c, &d).unwrap();
        prop_assert!(loewner_leq(&lo, &hi, 1e-8).unwrap().pass);
    }

    #[test]
    fn commuting_operands_match_scalar_means(
        a in prop::collection::vec(0.1f64..10.0, 1..6),
        seed in any::<u64>(),
        t in 0.0f64..=1.0,
    ) {
        let mut rng = SplitMix64::new(seed);
        let b: Vec<f64> = a.iter().map(|_| rng.uniform(0.1, 10.0)).collect();
        let scalar = [
            (MatrixMean::arithmetic(t).unwrap(), &(|x: f64, y: f64| (1.0 - t) * x + t * y) as &dyn Fn(f64, f64) -> f64),
            (MatrixMean::harmonic(t).unwrap(), &|x: f64, y: f64| 1.0 / ((1.0 - t) / x + t / y)),
            (MatrixMean::geometric(t).unwrap(), &|x: f64, y: f64| x.powf(1.0 - t) * y.powf(t)),
        ];
        for (sigma, oracle) in scalar {
            let v = sigma.apply(&HermitianMatrix::from_real_diag(&a), &HermitianMatrix::from_real_diag(&b)).unwrap();
            for i in 0..a.len() {
                let want = oracle(a[i], b[i]);
                prop_assert!((v[(i, i)].re - want).abs() <= 1e-12 * (1.0 + want), "{}", sigma.name());
            }
        }
    }
}
