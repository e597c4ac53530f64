use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, SymbolStream};
use crate::dist::{sup_distance, Distribution, SUM_TOLERANCE};
use crate::error::{Error, Result};
use crate::graph::{strongly_connected_components, LabeledGraph};

/// Convergence tolerance for the stationary distribution fixed point.
pub const STATIONARY_TOLERANCE: f64 = 1e-10;
const STATIONARY_MAX_ITERS: usize = 1_000_000;

/// Default string-length cutoff for [`pfsa_distance`].
pub const DEFAULT_DISTANCE_DEPTH: usize = 8;

/// A probabilistic finite-state automaton: a deterministic symbol-labeled
/// transition graph together with a row-stochastic morph matrix giving each
/// state's next-symbol generation probabilities.
///
/// A valid machine is strongly connected, so the stationary distribution is
/// unique and no initial state needs to be carried around.
#[derive(Debug, Clone, PartialEq)]
pub struct Pfsa {
    alphabet: Alphabet,
    /// `delta[state][symbol] -> state`
    delta: Vec<Vec<usize>>,
    /// `morph[state][symbol] -> generation probability`
    morph: Vec<Vec<f64>>,
}

/// A violation found by [`Pfsa::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum PfsaViolation {
    NonStochasticRow { state: usize, sum: f64 },
    NegativeEntry { state: usize, symbol: usize, value: f64 },
    NotStronglyConnected { n_components: usize },
}

impl fmt::Display for PfsaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PfsaViolation::NonStochasticRow { state, sum } => {
                write!(f, "morph row of state {state} sums to {sum}, expected 1")
            }
            PfsaViolation::NegativeEntry { state, symbol, value } => {
                write!(f, "morph entry ({state}, {symbol}) is {value}, expected >= 0")
            }
            PfsaViolation::NotStronglyConnected { n_components } => {
                write!(f, "transition graph has {n_components} strongly connected components")
            }
        }
    }
}

impl Pfsa {
    /// Builds a machine after checking shapes and transition ranges.
    /// Stochasticity and connectivity are reported by [`Pfsa::validate`],
    /// not enforced here, so defective machines can be examined.
    pub fn new(alphabet: Alphabet, delta: Vec<Vec<usize>>, morph: Vec<Vec<f64>>) -> Result<Self> {
        let n = delta.len();
        if n == 0 {
            return Err(Error::InvalidMachine("machine has no states".into()));
        }
        if morph.len() != n {
            return Err(Error::InvalidMachine(format!(
                "{} morph rows for {} states",
                morph.len(),
                n
            )));
        }
        for (q, (drow, mrow)) in delta.iter().zip(&morph).enumerate() {
            if drow.len() != alphabet.len() || mrow.len() != alphabet.len() {
                return Err(Error::InvalidMachine(format!(
                    "state {q} rows do not match alphabet size {}",
                    alphabet.len()
                )));
            }
            if let Some(&t) = drow.iter().find(|&&t| t >= n) {
                return Err(Error::InvalidMachine(format!(
                    "state {q} transitions to out-of-range state {t}"
                )));
            }
            if mrow.iter().any(|p| !p.is_finite()) {
                return Err(Error::InvalidMachine(format!(
                    "state {q} morph row contains a non-finite entry"
                )));
            }
        }
        Ok(Self { alphabet, delta, morph })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
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

    pub fn morph(&self) -> &[Vec<f64>] {
        &self.morph
    }

    pub fn morph_row(&self, state: usize) -> &[f64] {
        &self.morph[state]
    }

    /// The transition graph with probabilities dropped.
    pub fn graph(&self) -> LabeledGraph {
        LabeledGraph::new(self.alphabet.clone(), self.delta.clone())
            .expect("machine delta is shape-checked")
    }

    /// Checks every machine invariant and reports all violations found.
    pub fn validate(&self) -> Vec<PfsaViolation> {
        let mut report = Vec::new();
        for (q, row) in self.morph.iter().enumerate() {
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

    /// The row-stochastic state transition matrix: entry (i, j) is the total
    /// probability of moving from state i to state j in one step.
    pub fn transition_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n_states();
        let mut m = vec![vec![0.0; n]; n];
        for q in 0..n {
            for sigma in 0..self.alphabet.len() {
                m[q][self.delta[q][sigma]] += self.morph[q][sigma];
            }
        }
        m
    }

    /// The symbol-specific transformation matrix: entry (i, j) is the morph
    /// probability of `symbol` at state i when its target is state j, so each
    /// row has at most one non-zero entry.
    pub fn transformation_matrix(&self, symbol: &str) -> Result<Vec<Vec<f64>>> {
        let sigma = self.alphabet.index_of(symbol)? as usize;
        let n = self.n_states();
        let mut g = vec![vec![0.0; n]; n];
        for q in 0..n {
            g[q][self.delta[q][sigma]] = self.morph[q][sigma];
        }
        Ok(g)
    }

    /// The unique stationary distribution of the state chain, found by
    /// damped power iteration from the uniform distribution.
    pub fn stationary_distribution(&self) -> Result<Distribution> {
        stationary_of(&self.transition_matrix())
    }

    /// Pushes a state distribution through the machine along `stream`,
    /// renormalizing after each symbol. The empty stream returns `start`
    /// unchanged. Errors when the stream has zero probability from `start`.
    pub fn propagate_distribution(
        &self,
        start: &Distribution,
        stream: &SymbolStream,
    ) -> Result<Distribution> {
        if start.len() != self.n_states() {
            return Err(Error::InvalidInput(format!(
                "state distribution of length {} for {} states",
                start.len(),
                self.n_states()
            )));
        }
        if stream.alphabet() != &self.alphabet {
            return Err(Error::AlphabetMismatch(
                "stream alphabet differs from machine alphabet".into(),
            ));
        }
        let mut current = start.weights().to_vec();
        for &sigma in stream.symbols() {
            let mut next = vec![0.0; current.len()];
            let mut total = 0.0;
            for (q, &w) in current.iter().enumerate() {
                if w > 0.0 {
                    let p = self.morph[q][sigma as usize];
                    next[self.delta[q][sigma as usize]] += w * p;
                    total += w * p;
                }
            }
            if total <= 0.0 {
                return Err(Error::ZeroProbabilityHistory);
            }
            for w in &mut next {
                *w /= total;
            }
            current = next;
        }
        Distribution::new(current)
    }

    /// Samples a stream of the requested length, starting from the state of
    /// maximum stationary weight (lowest index on ties). Deterministic for a
    /// fixed seed.
    pub fn sample_stream(&self, length: usize, seed: u64) -> Result<SymbolStream> {
        let stationary = self.stationary_distribution()?;
        let mut state = argmax(stationary.weights());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut data = Vec::with_capacity(length);
        for _ in 0..length {
            let sigma = sample_index(&self.morph[state], &mut rng);
            data.push(sigma as u8);
            state = self.delta[state][sigma];
        }
        SymbolStream::new(self.alphabet.clone(), data)
    }
}

/// Index of the largest entry, lowest index on ties.
pub(crate) fn argmax(weights: &[f64]) -> usize {
    let mut best = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > weights[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn sample_index(weights: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Stationary row vector of a row-stochastic matrix. Iterates the lazy chain
/// (M + I)/2 so periodic chains converge too; the fixed point is the same.
pub(crate) fn stationary_of(matrix: &[Vec<f64>]) -> Result<Distribution> {
    let n = matrix.len();
    let mut v = vec![1.0 / n as f64; n];
    for _ in 0..STATIONARY_MAX_ITERS {
        let mut next = vec![0.0; n];
        for (i, &w) in v.iter().enumerate() {
            if w > 0.0 {
                for (j, &m) in matrix[i].iter().enumerate() {
                    next[j] += w * m;
                }
            }
        }
        let residual = sup_distance(&next, &v);
        for (x, &y) in next.iter_mut().zip(&v) {
            *x = 0.5 * *x + 0.5 * y;
        }
        v = next;
        if residual <= STATIONARY_TOLERANCE {
            let total: f64 = v.iter().sum();
            return Distribution::new(v.iter().map(|w| w / total).collect());
        }
    }
    Err(Error::NonConvergence(STATIONARY_MAX_ITERS))
}

/// Truncated distance between two machines over the same alphabet: the
/// largest sup-norm gap between their analytic next-symbol distributions,
/// taken over all strings up to `depth` that are possible in both machines.
/// Zero for structurally identical machines, symmetric, and at most one.
pub fn pfsa_distance(g1: &Pfsa, g2: &Pfsa, depth: usize) -> Result<f64> {
    if g1.alphabet() != g2.alphabet() {
        return Err(Error::AlphabetMismatch(
            "machines are defined over different alphabets".into(),
        ));
    }
    let k = g1.alphabet().len();
    let p1 = g1.stationary_distribution()?.weights().to_vec();
    let p2 = g2.stationary_distribution()?.weights().to_vec();

    let next_symbol = |p: &[f64], g: &Pfsa| -> Vec<f64> {
        let mut out = vec![0.0; k];
        for (q, &w) in p.iter().enumerate() {
            for (o, &m) in out.iter_mut().zip(g.morph_row(q)) {
                *o += w * m;
            }
        }
        out
    };

    // Depth-first walk of the shared prefix tree; a branch stays live for a
    // machine while the string has positive probability under it.
    type Branch = (usize, Option<Vec<f64>>, Option<Vec<f64>>);
    let mut worst = 0.0f64;
    let mut stack: Vec<Branch> = vec![(0, Some(p1), Some(p2))];
    while let Some((d, s1, s2)) = stack.pop() {
        if let (Some(a), Some(b)) = (&s1, &s2) {
            worst = worst.max(sup_distance(&next_symbol(a, g1), &next_symbol(b, g2)));
        }
        if d == depth {
            continue;
        }
        for sigma in 0..k {
            let step = |s: &Option<Vec<f64>>, g: &Pfsa| -> Option<Vec<f64>> {
                let p = s.as_ref()?;
                let mut next = vec![0.0; p.len()];
                let mut total = 0.0;
                for (q, &w) in p.iter().enumerate() {
                    let m = g.morph()[q][sigma];
                    next[g.delta()[q][sigma]] += w * m;
                    total += w * m;
                }
                if total <= 0.0 {
                    return None;
                }
                for w in &mut next {
                    *w /= total;
                }
                Some(next)
            };
            let n1 = step(&s1, g1);
            let n2 = step(&s2, g2);
            if n1.is_some() || n2.is_some() {
                stack.push((d + 1, n1, n2));
            }
        }
    }
    Ok(worst)
}
