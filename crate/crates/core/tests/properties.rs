//! Property tests for the numeric invariants: stochasticity, entropy
//! extremes, quantizer behavior, and machine-algebra identities on random
//! fixtures.

use proptest::prelude::*;

use xpfsa::dist::{entropy, entropy_of, sup_distance, Distribution};
use xpfsa::fixtures::{random_graph, random_machine};
use xpfsa::quantize::{quantize_quantile, quantize_updown};
use xpfsa::{pfsa_distance, Alphabet, SymbolStream};

proptest! {
    #[test]
    fn entropy_bounds_and_extremes(raw in proptest::collection::vec(0.01f64..1.0, 2..6)) {
        let total: f64 = raw.iter().sum();
        let dist = Distribution::new(raw.iter().map(|w| w / total).collect()).unwrap();
        let h = entropy(&dist);
        let k = dist.len() as f64;
        prop_assert!(h >= 0.0);
        prop_assert!(h <= k.log2() + 1e-12);
        // uniform dominates
        prop_assert!(h <= entropy_of(&vec![1.0 / k; dist.len()]) + 1e-12);
    }

    #[test]
    fn point_masses_have_zero_entropy(len in 2usize..6, idx in 0usize..6) {
        let d = Distribution::point(len, idx % len);
        prop_assert_eq!(entropy(&d), 0.0);
    }

    #[test]
    fn updown_length_and_rule(series in proptest::collection::vec(-100.0f64..100.0, 2..50)) {
        let s = quantize_updown(&series).unwrap();
        prop_assert_eq!(s.len(), series.len() - 1);
        for (k, &sym) in s.symbols().iter().enumerate() {
            prop_assert_eq!(sym == 0, series[k + 1] < series[k]);
        }
    }

    #[test]
    fn quantile_symbols_in_range(
        series in proptest::collection::vec(-50.0f64..50.0, 4..60),
        k in 2usize..5,
    ) {
        prop_assume!(series.len() >= k);
        match quantize_quantile(&series, k) {
            Ok(s) => {
                prop_assert_eq!(s.len(), series.len());
                prop_assert!(s.symbols().iter().all(|&x| (x as usize) < k));
            }
            Err(_) => {
                // only the degenerate all-equal series may fail here
                prop_assert!(series.windows(2).all(|w| w[0] == w[1]));
            }
        }
    }

    #[test]
    fn stream_round_trip(data in proptest::collection::vec(0u8..2, 0..64)) {
        let s = SymbolStream::new(Alphabet::binary(), data).unwrap();
        let back = SymbolStream::parse(Alphabet::binary(), &s.render()).unwrap();
        prop_assert_eq!(s, back);
    }
}

#[test]
fn random_machines_satisfy_matrix_invariants() {
    for seed in 0..30u64 {
        let machine = random_machine(1 + (seed as usize % 4), 2 + (seed as usize % 2), seed);
        // morph rows and transition rows are stochastic
        for row in machine.morph() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        }
        let m = machine.transition_matrix();
        for row in &m {
            assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        }
        // transformation matrices decompose the transition matrix
        let k = machine.alphabet().len();
        let mut total = vec![vec![0.0; machine.n_states()]; machine.n_states()];
        for sigma in 0..k {
            let g = machine
                .transformation_matrix(machine.alphabet().label(sigma as u8))
                .unwrap();
            for (i, row) in g.iter().enumerate() {
                assert!(row.iter().filter(|&&v| v != 0.0).count() <= 1);
                for (j, &v) in row.iter().enumerate() {
                    total[i][j] += v;
                }
            }
        }
        for (ti, mi) in total.iter().zip(&m) {
            for (a, b) in ti.iter().zip(mi) {
                assert!((a - b).abs() <= 1e-12);
            }
        }
        // stationary distribution is a fixed point
        let p = machine.stationary_distribution().unwrap();
        let mut next = vec![0.0; p.len()];
        for (i, &w) in p.weights().iter().enumerate() {
            for (j, &mij) in m[i].iter().enumerate() {
                next[j] += w * mij;
            }
        }
        assert!(sup_distance(&next, p.weights()) <= 1e-10);
    }
}

#[test]
fn distance_is_symmetric_and_bounded_on_random_pairs() {
    for seed in 0..15u64 {
        let a = random_machine(1 + (seed as usize % 3), 2, 2 * seed);
        let b = random_machine(1 + ((seed as usize + 1) % 3), 2, 2 * seed + 1);
        let d_ab = pfsa_distance(&a, &b, 5).unwrap();
        let d_ba = pfsa_distance(&b, &a, 5).unwrap();
        assert!((d_ab - d_ba).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&d_ab));
        assert_eq!(pfsa_distance(&a, &a, 5).unwrap(), 0.0);
    }
}

#[test]
fn stream_run_is_a_distribution_on_random_graphs() {
    for seed in 0..10u64 {
        let g = random_graph(1 + (seed as usize % 4), 2, seed + 70);
        let m = random_machine(2, 2, seed + 90);
        let s = m.sample_stream(5000, seed).unwrap();
        let d = xpfsa::algebra::stream_run(&g, &s).unwrap();
        assert!((d.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        assert!(d.weights().iter().all(|&w| w >= 0.0));
    }
}
