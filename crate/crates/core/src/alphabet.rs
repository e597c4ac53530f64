use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered finite alphabet of distinct symbol labels.
///
/// Symbols are addressed by index everywhere in this crate; the alphabet is
/// the single place where indices and human-readable labels meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    labels: Arc<Vec<String>>,
}

impl Alphabet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidInput("alphabet must not be empty".into()));
        }
        if labels.len() > 256 {
            return Err(Error::InvalidInput(format!(
                "alphabet of size {} exceeds the supported maximum of 256",
                labels.len()
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::InvalidInput(format!("duplicate symbol label `{a}`")));
            }
        }
        Ok(Self { labels: Arc::new(labels) })
    }

    /// Binary alphabet `{"0", "1"}`.
    pub fn binary() -> Self {
        Self::new(["0", "1"]).expect("binary alphabet is valid")
    }

    /// Alphabet `{"0", "1", ..., "k-1"}`.
    pub fn indexed(k: usize) -> Result<Self> {
        Self::new((0..k).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // enforced non-empty at construction
    }

    pub fn label(&self, index: u8) -> &str {
        &self.labels[index as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<u8> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as u8)
            .ok_or_else(|| Error::UnknownSymbol(label.to_string()))
    }

    /// True when every label is a single character, so streams can be read
    /// and written as plain character runs.
    pub fn single_char(&self) -> bool {
        self.labels.iter().all(|l| l.chars().count() == 1)
    }
}

/// A finite run of symbols over a declared alphabet, stored as indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolStream {
    alphabet: Alphabet,
    data: Vec<u8>,
}

impl SymbolStream {
    pub fn new(alphabet: Alphabet, data: Vec<u8>) -> Result<Self> {
        let k = alphabet.len();
        if let Some(&bad) = data.iter().find(|&&s| (s as usize) >= k) {
            return Err(Error::InvalidInput(format!(
                "symbol index {bad} out of range for alphabet of size {k}"
            )));
        }
        Ok(Self { alphabet, data })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Self { alphabet, data: Vec::new() }
    }

    /// Parses a stream from labels. Accepts either one character per symbol
    /// (when every label is a single character) or comma-separated labels.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty(alphabet));
        }
        let mut data = Vec::new();
        if text.contains(',') {
            for part in text.split(',') {
                data.push(alphabet.index_of(part.trim())?);
            }
        } else {
            for ch in text.chars() {
                data.push(alphabet.index_of(&ch.to_string())?);
            }
        }
        Ok(Self { alphabet, data })
    }

    /// Renders the stream as a single line, inverse of [`SymbolStream::parse`].
    /// Single-character runs are used for alphabets of at most 10 symbols.
    pub fn render(&self) -> String {
        if self.alphabet.len() <= 10 && self.alphabet.single_char() {
            self.data.iter().map(|&s| self.alphabet.label(s)).collect()
        } else {
            let labels: Vec<&str> = self.data.iter().map(|&s| self.alphabet.label(s)).collect();
            labels.join(",")
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.data
    }

    /// Empirical relative frequency of each alphabet symbol.
    pub fn symbol_frequencies(&self) -> Vec<f64> {
        let mut counts = vec![0u64; self.alphabet.len()];
        for &s in &self.data {
            counts[s as usize] += 1;
        }
        let total = self.data.len().max(1) as f64;
        counts.iter().map(|&c| c as f64 / total).collect()
    }
}

impl fmt::Display for SymbolStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_labels() {
        assert!(Alphabet::new(["a", "b", "a"]).is_err());
    }

    #[test]
    fn label_index_bijection() {
        let a = Alphabet::new(["x", "y", "z"]).unwrap();
        for i in 0..3u8 {
            assert_eq!(a.index_of(a.label(i)).unwrap(), i);
        }
        assert!(a.index_of("w").is_err());
    }

    #[test]
    fn stream_rejects_out_of_range() {
        let a = Alphabet::binary();
        assert!(SymbolStream::new(a, vec![0, 2]).is_err());
    }

    #[test]
    fn parse_render_round_trip() {
        let a = Alphabet::binary();
        let s = SymbolStream::parse(a.clone(), "010011").unwrap();
        assert_eq!(s.symbols(), &[0, 1, 0, 0, 1, 1]);
        assert_eq!(s.render(), "010011");

        let wide = Alphabet::new(["lo", "hi"]).unwrap();
        let t = SymbolStream::parse(wide, "lo,hi,lo").unwrap();
        assert_eq!(t.render(), "lo,hi,lo");
    }
}
