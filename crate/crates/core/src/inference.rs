use crate::alphabet::SymbolStream;
use crate::counting::successor_counts;
use crate::dist::sup_distance;
use crate::error::{Error, Result};
use crate::graph::{strongly_connected_components, LabeledGraph};
use crate::heap::build_heap;
use crate::pfsa::Pfsa;

/// Knobs shared by self-model and cross-model inference.
#[derive(Debug, Clone, Copy)]
pub struct InferenceConfig {
    /// Sup-norm tolerance for merging derivative estimates into one state.
    pub epsilon: f64,
    /// Heap depth bound; `None` derives it from epsilon and the alphabet.
    pub depth: Option<usize>,
    /// Minimum occurrence support for a derivative estimate to be used.
    pub n_min: u64,
    /// Hard cap on discovered states.
    pub max_states: usize,
    /// Minimum input stream length.
    pub min_length: usize,
}

impl Default for InferenceConfig {
    fn default() -> Self {
        Self { epsilon: 0.05, depth: None, n_min: 50, max_states: 64, min_length: 1000 }
    }
}

impl InferenceConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        Self { epsilon, ..Self::default() }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 0.5) {
            return Err(Error::InvalidConfig(format!(
                "epsilon {} outside (0, 0.5]",
                self.epsilon
            )));
        }
        if self.depth == Some(0) {
            return Err(Error::InvalidConfig("depth must be at least 1".into()));
        }
        if self.max_states == 0 {
            return Err(Error::InvalidConfig("max_states must be at least 1".into()));
        }
        if self.n_min == 0 {
            return Err(Error::InvalidConfig("n_min must be at least 1".into()));
        }
        Ok(())
    }

    /// Heap depth: the configured value, or log_|Σ|(1/ε) rounded up.
    pub fn heap_depth(&self, alphabet_size: usize) -> usize {
        self.depth.unwrap_or_else(|| {
            let k = (alphabet_size.max(2)) as f64;
            ((1.0 / self.epsilon).ln() / k.ln()).ceil().max(1.0) as usize
        })
    }
}

/// A transition structure under construction: states carry the identifier
/// string that reached them and the reference distribution `h` against which
/// extensions are matched.
#[derive(Debug, Clone)]
pub struct Structure {
    pub states: Vec<StructureState>,
    /// `delta[state][symbol] -> state`
    pub delta: Vec<Vec<usize>>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct StructureState {
    pub id: Vec<u8>,
    pub h: Vec<f64>,
    pub support: u64,
}

impl Structure {
    pub fn n_states(&self) -> usize {
        self.states.len()
    }
}

/// Recursively extends states from the synchronizing string `x0`: each
/// (state, symbol) extension either merges with the nearest existing state
/// whose reference distribution lies within `epsilon` in sup norm, or opens
/// a new state. Extensions whose estimate rests on fewer than `n_min`
/// occurrences are routed as self-loops and flagged, keeping the transition
/// function total without trusting thin estimates.
pub(crate) fn extend_structure<F>(
    derive: F,
    x0: &[u8],
    n_symbols: usize,
    cfg: &InferenceConfig,
) -> Result<Structure>
where
    F: Fn(&[u8]) -> Option<(Vec<f64>, u64)>,
{
    cfg.check()?;
    let (h0, support0) = derive(x0).ok_or(Error::InsufficientData {
        needed: cfg.n_min as usize,
        got: 0,
    })?;
    let mut states = vec![StructureState { id: x0.to_vec(), h: h0, support: support0 }];
    let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; n_symbols]];
    let mut warnings = Vec::new();

    let mut q = 0;
    while q < states.len() {
        for sigma in 0..n_symbols {
            if delta[q][sigma].is_some() {
                continue;
            }
            let mut x = states[q].id.clone();
            x.push(sigma as u8);
            match derive(&x) {
                Some((phi, support)) => {
                    let (mut best, mut best_dist) = (0usize, f64::INFINITY);
                    for (j, st) in states.iter().enumerate() {
                        let d = sup_distance(&phi, &st.h);
                        if d < best_dist {
                            best = j;
                            best_dist = d;
                        }
                    }
                    if best_dist <= cfg.epsilon {
                        debug_assert!(sup_distance(&phi, &states[best].h) <= cfg.epsilon);
                        delta[q][sigma] = Some(best);
                    } else {
                        if states.len() >= cfg.max_states {
                            return Err(Error::ModelExplosion(cfg.max_states));
                        }
                        states.push(StructureState { id: x, h: phi, support });
                        delta.push(vec![None; n_symbols]);
                        delta[q][sigma] = Some(states.len() - 1);
                    }
                }
                None => {
                    warnings.push(format!(
                        "extension of state {q} by symbol {sigma} lacks support; self-looped"
                    ));
                    delta[q][sigma] = Some(q);
                }
            }
        }
        q += 1;
    }

    let delta = delta
        .into_iter()
        .map(|row| row.into_iter().map(|t| t.expect("loop fills all slots")).collect())
        .collect();
    Ok(Structure { states, delta, warnings })
}

/// Identifies the transition structure reachable from the synchronizing
/// string `x0` using the stream's own symbolic derivatives.
pub fn derive_structure(
    s: &SymbolStream,
    x0: &SymbolStream,
    cfg: &InferenceConfig,
) -> Result<Structure> {
    if s.alphabet() != x0.alphabet() {
        return Err(Error::AlphabetMismatch("x0 alphabet differs from stream".into()));
    }
    let k = s.alphabet().len();
    let symbols = s.symbols();
    let n_min = cfg.n_min;
    let derive = |x: &[u8]| -> Option<(Vec<f64>, u64)> {
        let (counts, support) = successor_counts(symbols, symbols, k, x);
        if support < n_min {
            return None;
        }
        Some((counts.iter().map(|&c| c as f64 / support as f64).collect(), support))
    };
    extend_structure(derive, x0.symbols(), k, cfg)
}

/// Restricts a structure to one strongly connected component: the largest,
/// preferring closed (terminal) components, then the one holding the
/// synchronizing state (state 0), then the one with the smallest member
/// index. Arcs that left the component are redirected to the member whose
/// reference distribution is nearest in sup norm to the lost target's.
pub fn extract_strong_component(structure: &Structure) -> Structure {
    let components = strongly_connected_components(&structure.delta);
    let closed = |c: &[usize]| {
        c.iter().all(|&q| structure.delta[q].iter().all(|t| c.contains(t)))
    };
    let chosen = components
        .iter()
        .max_by_key(|c| (c.len(), closed(c), c.contains(&0), std::cmp::Reverse(c[0])))
        .expect("at least one component");

    let mut remap = vec![usize::MAX; structure.n_states()];
    for (new, &old) in chosen.iter().enumerate() {
        remap[old] = new;
    }

    let mut warnings = structure.warnings.clone();
    let states: Vec<StructureState> =
        chosen.iter().map(|&old| structure.states[old].clone()).collect();
    let mut delta = Vec::with_capacity(chosen.len());
    for &old in chosen {
        let mut row = Vec::with_capacity(structure.delta[old].len());
        for (sigma, &target) in structure.delta[old].iter().enumerate() {
            if remap[target] != usize::MAX {
                row.push(remap[target]);
            } else {
                // nearest in-component state to the dropped target
                let lost = &structure.states[target].h;
                let (mut best, mut best_dist) = (0usize, f64::INFINITY);
                for (j, st) in states.iter().enumerate() {
                    let d = sup_distance(lost, &st.h);
                    if d < best_dist {
                        best = j;
                        best_dist = d;
                    }
                }
                warnings.push(format!(
                    "arc ({old}, {sigma}) left the strong component; redirected"
                ));
                row.push(best);
            }
        }
        delta.push(row);
    }
    Structure { states, delta, warnings }
}

/// Estimates arc probabilities by replaying the stream through the graph
/// from state 0 and row-normalizing the traversal counts. Rows of states the
/// replay never visited fall back to `reference_rows` when given, else to
/// uniform, with a warning either way.
pub fn estimate_arc_probabilities(
    graph: &LabeledGraph,
    s: &SymbolStream,
    reference_rows: Option<&[Vec<f64>]>,
) -> Result<Pfsa> {
    if s.alphabet() != graph.alphabet() {
        return Err(Error::AlphabetMismatch("stream alphabet differs from graph".into()));
    }
    if s.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let (n, k) = (graph.n_states(), graph.alphabet().len());
    let mut counts = vec![vec![0u64; k]; n];
    let mut state = 0usize;
    for &sigma in s.symbols() {
        counts[state][sigma as usize] += 1;
        state = graph.next(state, sigma);
    }

    let mut morph = Vec::with_capacity(n);
    for (q, row) in counts.iter().enumerate() {
        let total: u64 = row.iter().sum();
        if total > 0 {
            morph.push(row.iter().map(|&c| c as f64 / total as f64).collect());
        } else {
            log::warn!("state {q} was never visited during arc estimation");
            match reference_rows {
                Some(rows) => morph.push(rows[q].clone()),
                None => morph.push(vec![1.0 / k as f64; k]),
            }
        }
    }
    Pfsa::new(graph.alphabet().clone(), graph.delta().to_vec(), morph)
}

/// Full self-model inference: derivative heap, hull-vertex synchronization,
/// recursive structure extension, strong-component extraction, and arc
/// probability estimation by traversal counting.
pub fn infer_pfsa(s: &SymbolStream, cfg: &InferenceConfig) -> Result<Pfsa> {
    cfg.check()?;
    if s.len() < cfg.min_length {
        return Err(Error::InsufficientData { needed: cfg.min_length, got: s.len() });
    }
    let depth = cfg.heap_depth(s.alphabet().len());
    let heap = build_heap(s, depth, cfg.n_min)?;
    let x0 = SymbolStream::new(s.alphabet().clone(), heap.hull_vertex()?.string.clone())?;
    let structure = derive_structure(s, &x0, cfg)?;
    let component = extract_strong_component(&structure);
    let graph = LabeledGraph::new(s.alphabet().clone(), component.delta.clone())?;
    let rows: Vec<Vec<f64>> = component.states.iter().map(|st| st.h.clone()).collect();
    let machine = estimate_arc_probabilities(&graph, s, Some(&rows))?;
    debug_assert!(machine.is_valid(), "inference produced an invalid machine");
    Ok(machine)
}
