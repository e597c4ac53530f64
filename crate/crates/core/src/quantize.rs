use crate::alphabet::{Alphabet, SymbolStream};
use crate::error::{Error, Result};

/// Binary up/down quantization: symbol k is '0' when the series dropped
/// from sample k to k+1, and '1' when it held or rose. Output is one
/// shorter than the input because the first sample has no predecessor.
pub fn quantize_updown(series: &[f64]) -> Result<SymbolStream> {
    if series.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: series.len() });
    }
    let data = series
        .windows(2)
        .map(|w| if w[1] < w[0] { 0u8 } else { 1u8 })
        .collect();
    SymbolStream::new(Alphabet::binary(), data)
}

/// Quantizes by empirical k-quantile bins: each value maps to the number of
/// bin boundaries strictly below it, so boundary ties fall into the lower
/// bin. Boundaries are the j/k quantiles (linear interpolation between
/// order statistics). A constant series has no usable bins.
pub fn quantize_quantile(series: &[f64], k: usize) -> Result<SymbolStream> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 bins, got {k}")));
    }
    if series.len() < k {
        return Err(Error::InsufficientData { needed: k, got: series.len() });
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("series contains a non-finite value".into()));
    }
    let mut sorted = series.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if sorted.first() == sorted.last() {
        return Err(Error::DegenerateQuantization("all values are equal".into()));
    }

    let boundaries: Vec<f64> = (1..k).map(|j| quantile(&sorted, j as f64 / k as f64)).collect();
    let data = series
        .iter()
        .map(|&v| boundaries.iter().filter(|&&b| b < v).count() as u8)
        .collect();
    SymbolStream::new(Alphabet::indexed(k)?, data)
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
