use crate::alphabet::SymbolStream;
use crate::dist::{sup_distance, Distribution};
use crate::error::{Error, Result};
use crate::graph::{strongly_connected_components, LabeledGraph};
use crate::pfsa::{stationary_of, Pfsa};

/// Stationary weight below which a projected state is treated as never
/// realized and pruned.
const ZERO_WEIGHT: f64 = 1e-14;

/// A strongly connected component of the product of a machine with a graph,
/// carrying the machine's probabilities on the joint transition structure.
struct ProductComponent {
    /// (machine state, graph state) per component state, sorted by joint index
    pairs: Vec<(usize, usize)>,
    delta: Vec<Vec<usize>>,
    morph: Vec<Vec<f64>>,
}

/// Builds the product automaton of `g` and `h` and restricts it to one
/// closed strongly connected component.
///
/// The component is anchored at the joint state (0, 0): when the two
/// operands share a transition structure the walk never leaves the diagonal,
/// which is what makes `G` composed with its own graph reproduce `G`
/// state-for-state. From the anchor we follow each state's most probable
/// symbol until the walk cycles, then descend to a closed component so the
/// restricted chain is stochastic.
fn product_component(g: &Pfsa, h: &LabeledGraph) -> Result<ProductComponent> {
    if g.alphabet() != h.alphabet() {
        return Err(Error::AlphabetMismatch(
            "operands are defined over different alphabets".into(),
        ));
    }
    let k = g.alphabet().len();
    let (n, m) = (g.n_states(), h.n_states());
    let joint = |q: usize, r: usize| q * m + r;

    let mut delta = vec![vec![0usize; k]; n * m];
    for q in 0..n {
        for r in 0..m {
            for (sigma, slot) in delta[joint(q, r)].iter_mut().enumerate() {
                *slot = joint(g.delta()[q][sigma], h.next(r, sigma as u8));
            }
        }
    }

    let components = strongly_connected_components(&delta);
    let component_of = {
        let mut map = vec![0usize; n * m];
        for (ci, c) in components.iter().enumerate() {
            for &s in c {
                map[s] = ci;
            }
        }
        map
    };

    // greedy walk from (0, 0) until a state repeats
    let mut seen = vec![false; n * m];
    let mut state = joint(0, 0);
    while !seen[state] {
        seen[state] = true;
        let q = state / m;
        let sigma = crate::pfsa::argmax(g.morph_row(q));
        state = delta[state][sigma];
    }
    let mut chosen = component_of[state];

    // walk down the component DAG until the component is closed
    loop {
        let c = &components[chosen];
        let exit = c.iter().find_map(|&s| {
            delta[s].iter().find(|&&t| !c.contains(&t)).copied()
        });
        match exit {
            Some(t) => chosen = component_of[t],
            None => break,
        }
    }

    let keep = &components[chosen];
    let mut remap = vec![usize::MAX; n * m];
    for (new, &old) in keep.iter().enumerate() {
        remap[old] = new;
    }
    let pairs: Vec<(usize, usize)> = keep.iter().map(|&s| (s / m, s % m)).collect();
    let sub_delta: Vec<Vec<usize>> =
        keep.iter().map(|&s| delta[s].iter().map(|&t| remap[t]).collect()).collect();
    let sub_morph: Vec<Vec<f64>> = pairs.iter().map(|&(q, _)| g.morph_row(q).to_vec()).collect();

    Ok(ProductComponent { pairs, delta: sub_delta, morph: sub_morph })
}

impl ProductComponent {
    /// Stationary distribution of the component's state chain.
    fn stationary(&self) -> Result<Distribution> {
        let n = self.delta.len();
        let matrix: Vec<Vec<f64>> = self
            .delta
            .iter()
            .enumerate()
            .map(|(s, row)| {
                let mut out = vec![0.0; n];
                for (sigma, &t) in row.iter().enumerate() {
                    out[t] += self.morph[s][sigma];
                }
                out
            })
            .collect();
        stationary_of(&matrix)
    }
}

/// Synchronous composition: the product machine carrying `g`'s generation
/// probabilities over the joint transition structure, restricted to one
/// strongly connected component.
pub fn synchronous_composition(g: &Pfsa, h: &LabeledGraph) -> Result<Pfsa> {
    let pc = product_component(g, h)?;
    Pfsa::new(g.alphabet().clone(), pc.delta, pc.morph)
}

/// Projective composition together with the surviving `h`-state indices
/// (states of the result, in order). States of `h` with zero aggregate
/// stationary weight are pruned with re-closure.
pub fn projective_composition_detailed(
    g: &Pfsa,
    h: &LabeledGraph,
) -> Result<(Pfsa, Vec<usize>)> {
    let pc = product_component(g, h)?;
    let stationary = pc.stationary()?;

    let m = h.n_states();
    let k = h.alphabet().len();
    let mut weight = vec![0.0; m];
    let mut rows = vec![vec![0.0; k]; m];
    for (s, &(_, r)) in pc.pairs.iter().enumerate() {
        let w = stationary.get(s);
        weight[r] += w;
        for (slot, &m) in rows[r].iter_mut().zip(&pc.morph[s]) {
            *slot += w * m;
        }
    }

    let kept: Vec<usize> = (0..m).filter(|&r| weight[r] > ZERO_WEIGHT).collect();
    if kept.len() < m {
        log::warn!(
            "projective composition pruned {} state(s) with zero stationary weight",
            m - kept.len()
        );
    }
    if kept.is_empty() {
        return Err(Error::InvalidMachine("no state carries stationary weight".into()));
    }

    for &r in &kept {
        for slot in rows[r].iter_mut() {
            *slot /= weight[r];
        }
    }

    let mut remap = vec![usize::MAX; m];
    for (new, &old) in kept.iter().enumerate() {
        remap[old] = new;
    }
    let mut delta = Vec::with_capacity(kept.len());
    let mut morph = Vec::with_capacity(kept.len());
    for &r in &kept {
        let mut row = Vec::with_capacity(k);
        for sigma in 0..k {
            let t = h.next(r, sigma as u8);
            if remap[t] != usize::MAX {
                row.push(remap[t]);
            } else {
                // redirect into the nearest surviving row, as when closing a
                // strong component
                let (mut best, mut best_dist) = (0usize, f64::INFINITY);
                for (j, &kr) in kept.iter().enumerate() {
                    let d = sup_distance(&rows[t], &rows[kr]);
                    if d < best_dist {
                        best = j;
                        best_dist = d;
                    }
                }
                row.push(best);
            }
        }
        delta.push(row);
        morph.push(rows[r].clone());
    }

    Ok((Pfsa::new(h.alphabet().clone(), delta, morph)?, kept))
}

/// Projective composition: `g`'s statistics re-expressed on `h`'s graph by
/// stationary-weighted averaging of the product machine's rows.
pub fn projective_composition(g: &Pfsa, h: &LabeledGraph) -> Result<Pfsa> {
    projective_composition_detailed(g, h).map(|(p, _)| p)
}

/// The probability mass `g` assigns to each state of `h`: the marginal of
/// the product component's stationary distribution over the `h` coordinate.
pub fn projected_distribution(g: &Pfsa, h: &LabeledGraph) -> Result<Distribution> {
    let pc = product_component(g, h)?;
    let stationary = pc.stationary()?;

    let mut marginal = vec![0.0; h.n_states()];
    for (s, &(_, r)) in pc.pairs.iter().enumerate() {
        marginal[r] += stationary.get(s);
    }
    Distribution::new(marginal)
}

/// Normalized state-visit counts from replaying `s` through the graph from
/// state 0; the initial state is counted once.
pub fn stream_run(g: &LabeledGraph, s: &SymbolStream) -> Result<Distribution> {
    if s.alphabet() != g.alphabet() {
        return Err(Error::AlphabetMismatch("stream alphabet differs from graph".into()));
    }
    let mut visits = vec![0u64; g.n_states()];
    let mut state = 0usize;
    visits[0] = 1;
    for &sigma in s.symbols() {
        state = g.next(state, sigma);
        visits[state] += 1;
    }
    Distribution::from_counts(&visits)
}
