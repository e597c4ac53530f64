use crate::alphabet::SymbolStream;
use crate::dist::Distribution;
use crate::error::{Error, Result};

/// Number of overlapping occurrences of `x` as a substring of `s`.
/// The empty string counts `|s|` times.
pub fn symbolic_count(s: &SymbolStream, x: &SymbolStream) -> Result<u64> {
    if s.alphabet() != x.alphabet() {
        return Err(Error::AlphabetMismatch("pattern alphabet differs from stream".into()));
    }
    Ok(count_occurrences(s.symbols(), x.symbols()))
}

pub(crate) fn count_occurrences(s: &[u8], x: &[u8]) -> u64 {
    if x.is_empty() {
        return s.len() as u64;
    }
    if x.len() > s.len() {
        return 0;
    }
    s.windows(x.len()).filter(|w| *w == x).count() as u64
}

/// Empirical next-symbol distribution of `s` immediately after occurrences
/// of `x`, together with the number of occurrences that had a successor.
/// Errors when no occurrence of `x` is followed by a symbol.
pub fn symbolic_derivative(s: &SymbolStream, x: &SymbolStream) -> Result<(Distribution, u64)> {
    if s.alphabet() != x.alphabet() {
        return Err(Error::AlphabetMismatch("pattern alphabet differs from stream".into()));
    }
    let (counts, support) =
        successor_counts(s.symbols(), s.symbols(), s.alphabet().len(), x.symbols());
    if support == 0 {
        return Err(Error::NoOccurrence(x.render()));
    }
    Ok((Distribution::from_counts(&counts)?, support))
}

/// Number of positions where `x` ends at index k in `source` and
/// `target[k + 1]` equals `symbol`. Occurrences ending at the last index
/// have no successor and are not counted.
pub fn cross_count(
    source: &SymbolStream,
    target: &SymbolStream,
    x: &SymbolStream,
    symbol: &str,
) -> Result<u64> {
    if source.len() != target.len() {
        return Err(Error::LengthMismatch { left: source.len(), right: target.len() });
    }
    if source.alphabet() != x.alphabet() {
        return Err(Error::AlphabetMismatch("pattern alphabet differs from source stream".into()));
    }
    let sigma = target.alphabet().index_of(symbol)?;
    let (counts, _) =
        successor_counts(source.symbols(), target.symbols(), target.alphabet().len(), x.symbols());
    Ok(counts[sigma as usize])
}

/// Empirical distribution of the next `target` symbol immediately after
/// occurrences of `x` in `source`, with the supporting occurrence count.
pub fn cross_derivative(
    source: &SymbolStream,
    target: &SymbolStream,
    x: &SymbolStream,
) -> Result<(Distribution, u64)> {
    if source.len() != target.len() {
        return Err(Error::LengthMismatch { left: source.len(), right: target.len() });
    }
    if source.alphabet() != x.alphabet() {
        return Err(Error::AlphabetMismatch("pattern alphabet differs from source stream".into()));
    }
    let (counts, support) =
        successor_counts(source.symbols(), target.symbols(), target.alphabet().len(), x.symbols());
    if support == 0 {
        return Err(Error::NoOccurrence(x.render()));
    }
    Ok((Distribution::from_counts(&counts)?, support))
}

/// Tallies `target[j]` over every position j where `x` ends at j - 1 in
/// `source`. The empty pattern ends before every position, so its tally is
/// the full symbol count of `target`. Returns (per-symbol counts, total).
pub(crate) fn successor_counts(
    source: &[u8],
    target: &[u8],
    n_target_symbols: usize,
    x: &[u8],
) -> (Vec<u64>, u64) {
    let mut counts = vec![0u64; n_target_symbols];
    let n = source.len().min(target.len());
    let len = x.len();
    if len == 0 {
        for &t in &target[..n] {
            counts[t as usize] += 1;
        }
    } else {
        for j in len..n {
            if &source[j - len..j] == x {
                counts[target[j] as usize] += 1;
            }
        }
    }
    let support = counts.iter().sum();
    (counts, support)
}
