use emergence::rbn::{coupled_autopoiesis, measure_ensemble, CoupledConfig, EnsembleConfig, Rbn};
use proptest::prelude::*;

fn run_in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

fn small_ensemble(seed: u64) -> EnsembleConfig {
    EnsembleConfig {
        n: 12,
        ks: vec![0, 2, 4],
        replicates: 6,
        transient: 20,
        record: 30,
        bits: vec![1, 2],
        seed,
    }
}

#[test]
fn ensembles_do_not_depend_on_thread_count() {
    let cfg = small_ensemble(4);
    let one = run_in_pool(1, || measure_ensemble(&cfg).unwrap());
    let many = run_in_pool(4, || measure_ensemble(&cfg).unwrap());
    assert_eq!(one, many);
    let c = CoupledConfig {
        n_i: 6,
        n_e: 10,
        k_i: vec![1, 3],
        k_e: vec![2],
        replicates: 3,
        transient: 10,
        record: 20,
        ..CoupledConfig::default()
    };
    let one = run_in_pool(1, || coupled_autopoiesis(&c).unwrap());
    let many = run_in_pool(3, || coupled_autopoiesis(&c).unwrap());
    assert_eq!(format!("{one:?}"), format!("{many:?}"));
}

#[test]
fn regression_trajectory() {
    // recorded from the generator for (n = 8, k = 2, seed = 42)
    let mut net = Rbn::generate(8, 2, 42).unwrap();
    let m = net.run(0, 6);
    let rows: Vec<String> = (0..m.rows())
        .map(|t| {
            m.row(t)
                .iter()
                .map(|b| char::from(b'0' + *b as u8))
                .collect()
        })
        .collect();
    check_fixture(&rows.join(" "));
}

/// Compares against the fixture stored next to this file.
fn check_fixture(got: &str) {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/fixtures/rbn_n8_k2_seed42.txt"
    );
    let want = std::fs::read_to_string(path).expect("fixture file");
    assert_eq!(got, want.trim());
}

#[test]
fn k_zero_is_frozen_after_one_step() {
    let cfg = EnsembleConfig {
        ks: vec![0],
        transient: 1,
        ..small_ensemble(8)
    };
    for p in measure_ensemble(&cfg).unwrap() {
        assert_eq!((p.e.max, p.h.min), (0.0, 1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn update_is_synchronous(n in 1usize..20, k in 0usize..5, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let mut net = Rbn::generate(n, k, seed).unwrap();
        for _ in 0..5 {
            let old = net.state().to_vec();
            // two-buffer oracle: every node reads only the old state
            let expect: Vec<bool> = (0..n)
                .map(|i| {
                    let idx = net
                        .inputs_of(i)
                        .iter()
                        .fold(0usize, |acc, &j| (acc << 1) | old[j as usize] as usize);
                    net.table_of(i)[idx]
                })
                .collect();
            net.step();
            prop_assert_eq!(net.state(), &expect[..]);
        }
    }

    #[test]
    fn same_seed_same_trajectory(n in 1usize..30, k in 0usize..6, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let a = Rbn::generate(n, k, seed).unwrap().run(3, 10);
        let b = Rbn::generate(n, k, seed).unwrap().run(3, 10);
        prop_assert_eq!(a, b);
    }
}
