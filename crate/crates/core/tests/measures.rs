use emergence::measures::{classify, homeostasis, Category};
use emergence::{emergence, StateMatrix, SymbolSeries};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn worked_information_examples() {
    let bits = SymbolSeries::from_digits(&"0001".repeat(25), 2).unwrap();
    assert!((emergence(&bits).unwrap() - 0.811).abs() < 1e-3);
    let quad = SymbolSeries::from_digits(&"0133".repeat(25), 4).unwrap();
    assert!((emergence(&quad).unwrap() - 0.75).abs() < 1e-12);
}

#[test]
fn period_two_attractor_across_scales() {
    let rows: Vec<[u32; 3]> = (0..40)
        .map(|t| [(t % 2) as u32, (t % 2) as u32, 1 - (t % 2) as u32])
        .collect();
    let m = StateMatrix::from_rows(&rows, 2).unwrap();
    assert_eq!(homeostasis(&m).unwrap(), 0.0);
    assert_eq!(homeostasis(&m.regroup_time(2).unwrap()).unwrap(), 1.0);
}

#[test]
fn classification_bands() {
    assert_eq!(classify(0.0).unwrap(), Category::VeryLow);
    assert_eq!(classify(0.2).unwrap(), Category::Low);
    assert_eq!(classify(0.8).unwrap(), Category::VeryHigh);
    assert_eq!(classify(1.0).unwrap(), Category::VeryHigh);
    assert!(classify(1.01).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn uniform_rows_give_the_uncorrelated_baseline(seed in any::<u64>(), beta in 2usize..=10, width in 1usize..8) {
        let rows = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<u32> = (0..rows * width).map(|_| rng.gen_range(0..beta as u32)).collect();
        let m = StateMatrix::new(rows, width, beta, data).unwrap();
        let p = 1.0 / beta as f64;
        // per-position equalities of consecutive rows are pairwise independent
        let sigma = (p * (1.0 - p) / ((rows - 1) * width) as f64).sqrt();
        let h = homeostasis(&m).unwrap();
        prop_assert!((h - p).abs() <= 3.0 * sigma, "H = {h}, baseline {p}, σ = {sigma}");
    }
}
