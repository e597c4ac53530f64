use std::collections::HashMap;

use crate::alphabet::{Alphabet, SymbolStream};
use crate::dist::{entropy_of, Distribution};
use crate::error::{Error, Result};

/// One candidate string with its measured next-symbol distribution and the
/// number of occurrences supporting the estimate.
#[derive(Debug, Clone)]
pub struct HeapEntry {
    pub string: Vec<u8>,
    pub distribution: Distribution,
    pub count: u64,
}

/// A derivative heap: every string up to a depth bound whose estimated
/// next-symbol (or cross next-symbol) distribution rests on at least `n_min`
/// counted occurrences. The hull vertices of the stored distributions mark
/// synchronizing candidate strings.
#[derive(Debug, Clone)]
pub struct DerivativeHeap {
    input_alphabet: Alphabet,
    output_alphabet: Alphabet,
    depth: usize,
    n_min: u64,
    /// sorted by (length, lexicographic)
    entries: Vec<HeapEntry>,
}

impl DerivativeHeap {
    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input_alphabet
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output_alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn n_min(&self) -> u64 {
        self.n_min
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[HeapEntry] {
        &self.entries
    }

    pub fn get(&self, string: &[u8]) -> Option<&HeapEntry> {
        self.entries.iter().find(|e| e.string == string)
    }

    /// Selects an entry whose distribution sits on the convex hull of the
    /// heap. See [`hull_vertex`] for the selection rule.
    pub fn hull_vertex(&self) -> Result<&HeapEntry> {
        hull_vertex(self)
    }

    /// Builds a heap directly from prepared entries; used by tests that want
    /// hand-crafted geometry.
    pub fn from_entries(
        input_alphabet: Alphabet,
        output_alphabet: Alphabet,
        depth: usize,
        n_min: u64,
        mut entries: Vec<HeapEntry>,
    ) -> Result<Self> {
        for e in &entries {
            if e.distribution.len() != output_alphabet.len() {
                return Err(Error::InvalidInput("entry arity differs from output alphabet".into()));
            }
            if e.count < n_min || e.string.len() > depth {
                return Err(Error::InvalidInput("entry violates heap bounds".into()));
            }
        }
        entries.sort_by(|a, b| {
            (a.string.len(), &a.string).cmp(&(b.string.len(), &b.string))
        });
        Ok(Self { input_alphabet, output_alphabet, depth, n_min, entries })
    }
}

/// Heap over a single stream: for every string of length at most `depth`
/// with at least `n_min` succeeded occurrences, the empirical next-symbol
/// distribution of the stream itself.
pub fn build_heap(s: &SymbolStream, depth: usize, n_min: u64) -> Result<DerivativeHeap> {
    if s.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    build(
        s.alphabet().clone(),
        s.alphabet().clone(),
        s.symbols(),
        s.symbols(),
        depth,
        n_min,
    )
}

/// Cross heap over an aligned pair: candidate strings range over the source
/// alphabet, distributions over the target's next symbol.
pub fn build_cross_heap(
    source: &SymbolStream,
    target: &SymbolStream,
    depth: usize,
    n_min: u64,
) -> Result<DerivativeHeap> {
    if source.len() != target.len() {
        return Err(Error::LengthMismatch { left: source.len(), right: target.len() });
    }
    if source.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    build(
        source.alphabet().clone(),
        target.alphabet().clone(),
        source.symbols(),
        target.symbols(),
        depth,
        n_min,
    )
}

/// Single pass over successor positions; tallies every window of length
/// 0..=depth ending just before each position. Matches the naive per-string
/// scanner exactly.
fn build(
    input_alphabet: Alphabet,
    output_alphabet: Alphabet,
    source: &[u8],
    target: &[u8],
    depth: usize,
    n_min: u64,
) -> Result<DerivativeHeap> {
    let k_out = output_alphabet.len();
    let n = source.len().min(target.len());
    let mut tallies: HashMap<Vec<u8>, Vec<u64>> = HashMap::new();
    for j in 0..n {
        let out = target[j] as usize;
        for len in 0..=depth.min(j) {
            let window = &source[j - len..j];
            match tallies.get_mut(window) {
                Some(counts) => counts[out] += 1,
                None => {
                    let mut counts = vec![0u64; k_out];
                    counts[out] = 1;
                    tallies.insert(window.to_vec(), counts);
                }
            }
        }
    }

    let mut entries: Vec<HeapEntry> = Vec::new();
    for (string, counts) in tallies {
        let support: u64 = counts.iter().sum();
        if support >= n_min {
            entries.push(HeapEntry {
                string,
                distribution: Distribution::from_counts(&counts)?,
                count: support,
            });
        }
    }
    entries.sort_by(|a, b| (a.string.len(), &a.string).cmp(&(b.string.len(), &b.string)));

    if entries.is_empty() {
        return Err(Error::InsufficientData { needed: n_min as usize, got: n });
    }
    Ok(DerivativeHeap { input_alphabet, output_alphabet, depth, n_min, entries })
}

/// Picks a hull-vertex string from the heap.
///
/// For binary output alphabets the hull of the stored points is the interval
/// spanned by the first coordinate, so the extremes are the vertices; the
/// lower-entropy extreme is preferred as the better-synchronized one. Among
/// entries statistically indistinguishable from the chosen extreme (within
/// three standard errors of both estimates) the best-supported string wins,
/// which keeps rare, noisy strings from hijacking synchronization. For
/// three-symbol outputs the planar hull is computed exactly; for larger
/// alphabets per-coordinate maximizers stand in for the vertex set. Final
/// ties go to the shorter, then lexicographically smaller string.
pub fn hull_vertex(heap: &DerivativeHeap) -> Result<&HeapEntry> {
    if heap.entries.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let entries = &heap.entries;
    match heap.output_alphabet.len() {
        1 => Ok(&entries[0]),
        2 => Ok(binary_vertex(entries)),
        3 => Ok(min_entropy(planar_hull_candidates(entries), entries)),
        _ => Ok(min_entropy(coordinate_argmax_candidates(entries), entries)),
    }
}

fn standard_error(count: u64) -> f64 {
    (0.25 / count as f64).sqrt()
}

/// (length, lexicographic) preference used in final tie-breaks.
fn shorter_lex(a: &HeapEntry, b: &HeapEntry) -> std::cmp::Ordering {
    (a.string.len(), &a.string).cmp(&(b.string.len(), &b.string))
}

fn binary_vertex(entries: &[HeapEntry]) -> &HeapEntry {
    let first = |e: &HeapEntry| e.distribution.get(0);
    let better = |a: &HeapEntry, b: &HeapEntry| -> bool {
        // prefer larger support, then shorter/lex
        match a.count.cmp(&b.count) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => shorter_lex(a, b).is_lt(),
        }
    };

    let mut hi = &entries[0];
    let mut lo = &entries[0];
    for e in entries {
        if first(e) > first(hi) || (first(e) == first(hi) && better(e, hi)) {
            hi = e;
        }
        if first(e) < first(lo) || (first(e) == first(lo) && better(e, lo)) {
            lo = e;
        }
    }

    let side = if entropy_of(hi.distribution.weights()) <= entropy_of(lo.distribution.weights()) {
        hi
    } else {
        lo
    };

    // Entries within joint sampling tolerance of the extreme are treated as
    // the same vertex; take the most reliably estimated one.
    let mut best = side;
    for e in entries {
        let band = 3.0 * (standard_error(e.count) + standard_error(side.count));
        if (first(e) - first(side)).abs() <= band
            && (e.count > best.count || (e.count == best.count && shorter_lex(e, best).is_lt()))
        {
            best = e;
        }
    }
    best
}

/// Indices of entries lying on the convex hull of the (p0, p1) projection.
fn planar_hull_candidates(entries: &[HeapEntry]) -> Vec<usize> {
    let mut pts: Vec<(f64, f64, usize)> = entries
        .iter()
        .enumerate()
        .map(|(i, e)| (e.distribution.get(0), e.distribution.get(1), i))
        .collect();
    pts.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).unwrap());
    pts.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    if pts.len() <= 2 {
        return pts.iter().map(|p| p.2).collect();
    }

    let cross = |o: &(f64, f64, usize), a: &(f64, f64, usize), b: &(f64, f64, usize)| -> f64 {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(f64, f64, usize)> = Vec::new();
    for p in pts.iter().chain(pts.iter().rev().skip(1)) {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();

    // every entry that coincides with a hull vertex is a candidate
    let mut candidates = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        let p = (e.distribution.get(0), e.distribution.get(1));
        if hull.iter().any(|h| h.0 == p.0 && h.1 == p.1) {
            candidates.push(i);
        }
    }
    candidates
}

fn coordinate_argmax_candidates(entries: &[HeapEntry]) -> Vec<usize> {
    let arity = entries[0].distribution.len();
    let mut candidates = Vec::new();
    for coord in 0..arity {
        let mut best = 0;
        for (i, e) in entries.iter().enumerate() {
            let (v, b) = (e.distribution.get(coord), entries[best].distribution.get(coord));
            if v > b || (v == b && shorter_lex(e, &entries[best]).is_lt()) {
                best = i;
            }
        }
        if !candidates.contains(&best) {
            candidates.push(best);
        }
    }
    candidates
}

fn min_entropy(candidates: Vec<usize>, entries: &[HeapEntry]) -> &HeapEntry {
    let mut best = &entries[candidates[0]];
    for &i in &candidates[1..] {
        let e = &entries[i];
        let (he, hb) = (entropy_of(e.distribution.weights()), entropy_of(best.distribution.weights()));
        if he < hb || (he == hb && shorter_lex(e, best).is_lt()) {
            best = e;
        }
    }
    best
}
