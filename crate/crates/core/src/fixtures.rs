//! Small machine builders shared by the test suites and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Alphabet;
use crate::error::Result;
use crate::graph::LabeledGraph;
use crate::pfsa::Pfsa;

/// Machine whose state is the last emitted symbol: every arc labeled sigma
/// leads to state sigma. Needs one morph row per symbol.
pub fn last_symbol_machine(rows: Vec<Vec<f64>>) -> Result<Pfsa> {
    let k = rows.len();
    let delta = vec![(0..k).collect::<Vec<usize>>(); k];
    Pfsa::new(Alphabet::indexed(k)?, delta, rows)
}

/// The two-state binary machine used as a running example: state 0 emits
/// '0' with probability 0.85, state 1 with probability 0.25, and the state
/// is always the last emitted symbol.
pub fn skewed_two_state() -> Pfsa {
    last_symbol_machine(vec![vec![0.85, 0.15], vec![0.25, 0.75]]).unwrap()
}

/// Binary machine over `rows.len()` states where '0' advances along a cycle
/// and '1' resets to state 0; any string containing '1' synchronizes it.
pub fn reset_cycle_machine(rows: Vec<Vec<f64>>) -> Result<Pfsa> {
    let n = rows.len();
    let delta = (0..n).map(|q| vec![(q + 1) % n, 0]).collect();
    Pfsa::new(Alphabet::binary(), delta, rows)
}

/// Random strongly connected machine with morph entries bounded away from
/// zero. Deterministic for a fixed seed.
pub fn random_machine(n_states: usize, n_symbols: usize, seed: u64) -> Pfsa {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = Alphabet::indexed(n_symbols).expect("small alphabet");
    loop {
        let delta: Vec<Vec<usize>> = (0..n_states)
            .map(|_| (0..n_symbols).map(|_| rng.gen_range(0..n_states)).collect())
            .collect();
        let morph: Vec<Vec<f64>> = (0..n_states)
            .map(|_| {
                let raw: Vec<f64> = (0..n_symbols).map(|_| 0.2 + rng.gen::<f64>()).collect();
                let total: f64 = raw.iter().sum();
                raw.into_iter().map(|w| w / total).collect()
            })
            .collect();
        let machine = Pfsa::new(alphabet.clone(), delta, morph).expect("shapes are consistent");
        if machine.is_valid() {
            return machine;
        }
    }
}

/// Random strongly connected labeled graph. Deterministic for a fixed seed.
pub fn random_graph(n_states: usize, n_symbols: usize, seed: u64) -> LabeledGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = Alphabet::indexed(n_symbols).expect("small alphabet");
    loop {
        let delta: Vec<Vec<usize>> = (0..n_states)
            .map(|_| (0..n_symbols).map(|_| rng.gen_range(0..n_states)).collect())
            .collect();
        let graph = LabeledGraph::new(alphabet.clone(), delta).expect("shapes are consistent");
        if graph.is_strongly_connected() {
            return graph;
        }
    }
}

/// Pool of mild 1-3 state binary generators whose length-5 string
/// probabilities all stay above one percent; convenient sources for
/// independence experiments at moderate stream lengths.
pub fn mild_generator(index: usize) -> Pfsa {
    match index % 6 {
        0 => last_symbol_machine(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap(),
        1 => last_symbol_machine(vec![vec![0.56, 0.44], vec![0.44, 0.56]]).unwrap(),
        2 => reset_cycle_machine(vec![vec![0.52, 0.48], vec![0.45, 0.55]]).unwrap(),
        3 => reset_cycle_machine(vec![vec![0.55, 0.45], vec![0.5, 0.5], vec![0.45, 0.55]])
            .unwrap(),
        4 => last_symbol_machine(vec![vec![0.54, 0.46], vec![0.47, 0.53]]).unwrap(),
        _ => reset_cycle_machine(vec![vec![0.5, 0.5], vec![0.56, 0.44], vec![0.44, 0.56]])
            .unwrap(),
    }
}
