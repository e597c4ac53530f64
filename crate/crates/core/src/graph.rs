use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

/// A deterministic symbol-labeled transition graph: for every state and
/// every alphabet symbol there is exactly one target state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    /// `delta[state][symbol] -> state`
    delta: Vec<Vec<usize>>,
}

impl LabeledGraph {
    pub fn new(alphabet: Alphabet, delta: Vec<Vec<usize>>) -> Result<Self> {
        let n = delta.len();
        if n == 0 {
            return Err(Error::InvalidMachine("graph has no states".into()));
        }
        for (q, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::InvalidMachine(format!(
                    "state {q} has {} transitions, expected {}",
                    row.len(),
                    alphabet.len()
                )));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return Err(Error::InvalidMachine(format!(
                    "state {q} transitions to out-of-range state {t}"
                )));
            }
        }
        Ok(Self { alphabet, delta })
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

    pub fn is_strongly_connected(&self) -> bool {
        strongly_connected_components(&self.delta).len() == 1
    }
}

/// Tarjan's strongly connected components over `delta[state][k] -> state`
/// adjacency. Components come out in reverse topological order (sinks first);
/// states within a component are sorted ascending.
pub fn strongly_connected_components(delta: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        delta: &'a [Vec<usize>],
        index: usize,
        indices: Vec<Option<usize>>,
        lowlink: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        components: Vec<Vec<usize>>,
    }

    fn connect(s: &mut State, v: usize) {
        s.indices[v] = Some(s.index);
        s.lowlink[v] = s.index;
        s.index += 1;
        s.stack.push(v);
        s.on_stack[v] = true;

        for i in 0..s.delta[v].len() {
            let w = s.delta[v][i];
            if s.indices[w].is_none() {
                connect(s, w);
                s.lowlink[v] = s.lowlink[v].min(s.lowlink[w]);
            } else if s.on_stack[w] {
                s.lowlink[v] = s.lowlink[v].min(s.indices[w].unwrap());
            }
        }

        if s.lowlink[v] == s.indices[v].unwrap() {
            let mut component = Vec::new();
            loop {
                let w = s.stack.pop().unwrap();
                s.on_stack[w] = false;
                component.push(w);
                if w == v {
                    break;
                }
            }
            component.sort_unstable();
            s.components.push(component);
        }
    }

    let n = delta.len();
    let mut state = State {
        delta,
        index: 0,
        indices: vec![None; n],
        lowlink: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        components: Vec::new(),
    };
    for v in 0..n {
        if state.indices[v].is_none() {
            connect(&mut state, v);
        }
    }
    state.components
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_has_three_components() {
        // 0 -> 1 -> 2 with self-loops on the second symbol
        let delta = vec![vec![1, 0], vec![2, 1], vec![2, 2]];
        let sccs = strongly_connected_components(&delta);
        assert_eq!(sccs.len(), 3);
    }

    #[test]
    fn cycle_is_one_component() {
        let delta = vec![vec![1, 1], vec![2, 2], vec![0, 0]];
        let sccs = strongly_connected_components(&delta);
        assert_eq!(sccs, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn graph_validation() {
        let a = Alphabet::binary();
        assert!(LabeledGraph::new(a.clone(), vec![vec![0, 1], vec![1, 0]]).is_ok());
        assert!(LabeledGraph::new(a.clone(), vec![vec![0], vec![1, 0]]).is_err());
        assert!(LabeledGraph::new(a, vec![vec![0, 2], vec![1, 0]]).is_err());
    }
}
