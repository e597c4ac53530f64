use crate::alphabet::Alphabet;
use crate::dist::SUM_TOLERANCE;
use crate::error::{Error, Result};
use crate::graph::{strongly_connected_components, LabeledGraph};
use crate::pfsa::PfsaViolation;

/// A crossed probabilistic finite-state automaton: transitions are driven by
/// the input alphabet (with no probabilities attached), and each state
/// carries an output distribution over a possibly different output alphabet.
///
/// A machine of this kind captures how much the next symbol of one process
/// is pinned down by the observed history of another.
#[derive(Debug, Clone, PartialEq)]
pub struct Xpfsa {
    input_alphabet: Alphabet,
    output_alphabet: Alphabet,
    /// `delta[state][input symbol] -> state`
    delta: Vec<Vec<usize>>,
    /// `out_morph[state][output symbol] -> emission probability`
    out_morph: Vec<Vec<f64>>,
}

impl Xpfsa {
    pub fn new(
        input_alphabet: Alphabet,
        output_alphabet: Alphabet,
        delta: Vec<Vec<usize>>,
        out_morph: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n = delta.len();
        if n == 0 {
            return Err(Error::InvalidMachine("machine has no states".into()));
        }
        if out_morph.len() != n {
            return Err(Error::InvalidMachine(format!(
                "{} output rows for {} states",
                out_morph.len(),
                n
            )));
        }
        for (q, row) in delta.iter().enumerate() {
            if row.len() != input_alphabet.len() {
                return Err(Error::InvalidMachine(format!(
                    "state {q} has {} transitions, expected {}",
                    row.len(),
                    input_alphabet.len()
                )));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return Err(Error::InvalidMachine(format!(
                    "state {q} transitions to out-of-range state {t}"
                )));
            }
        }
        for (q, row) in out_morph.iter().enumerate() {
            if row.len() != output_alphabet.len() {
                return Err(Error::InvalidMachine(format!(
                    "state {q} output row does not match output alphabet size {}",
                    output_alphabet.len()
                )));
            }
            if row.iter().any(|p| !p.is_finite()) {
                return Err(Error::InvalidMachine(format!(
                    "state {q} output row contains a non-finite entry"
                )));
            }
        }
        Ok(Self { input_alphabet, output_alphabet, delta, out_morph })
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input_alphabet
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output_alphabet
    }

    pub fn n_states(&self) -> usize {
        self.delta.len()
    }

    pub fn next(&self, state: usize, symbol: u8) -> usize {
        self.delta[state][symbol as usize]
    }

    pub fn delta(&self) -> &[Vec<usize>] {
        &self.delta
    }

    pub fn out_morph(&self) -> &[Vec<f64>] {
        &self.out_morph
    }

    pub fn out_row(&self, state: usize) -> &[f64] {
        &self.out_morph[state]
    }

    /// The input-driven transition graph.
    pub fn graph(&self) -> LabeledGraph {
        LabeledGraph::new(self.input_alphabet.clone(), self.delta.clone())
            .expect("machine delta is shape-checked")
    }

    /// Reports output-row stochasticity and connectivity violations.
    pub fn validate(&self) -> Vec<PfsaViolation> {
        let mut report = Vec::new();
        for (q, row) in self.out_morph.iter().enumerate() {
            for (sigma, &p) in row.iter().enumerate() {
                if p < 0.0 {
                    report.push(PfsaViolation::NegativeEntry { state: q, symbol: sigma, value: p });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                report.push(PfsaViolation::NonStochasticRow { state: q, sum });
            }
        }
        let components = strongly_connected_components(&self.delta);
        if components.len() != 1 {
            report.push(PfsaViolation::NotStronglyConnected { n_components: components.len() });
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_mixed_alphabet_sizes() {
        let x = Xpfsa::new(
            Alphabet::binary(),
            Alphabet::new(["a", "b", "c"]).unwrap(),
            vec![vec![0, 1], vec![0, 1]],
            vec![vec![0.2, 0.3, 0.5], vec![0.1, 0.1, 0.8]],
        )
        .unwrap();
        assert!(x.validate().is_empty());
        assert_eq!(x.n_states(), 2);
    }

    #[test]
    fn reports_bad_output_row() {
        let x = Xpfsa::new(
            Alphabet::binary(),
            Alphabet::binary(),
            vec![vec![0, 0]],
            vec![vec![0.5, 0.4]],
        )
        .unwrap();
        assert!(!x.is_valid());
    }
}
