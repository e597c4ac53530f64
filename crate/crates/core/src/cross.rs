use crate::alphabet::SymbolStream;
use crate::counting::successor_counts;
use crate::error::{Error, Result};
use crate::heap::build_cross_heap;
use crate::inference::{extend_structure, extract_strong_component, InferenceConfig};
use crate::xpfsa::Xpfsa;

/// Outcome of cross-model inference: the machine, the synchronizing string
/// that anchored it, and per-state support diagnostics.
#[derive(Debug, Clone)]
pub struct CrossInferenceResult {
    pub machine: Xpfsa,
    pub sync_string: SymbolStream,
    /// Occurrences backing each state's output row.
    pub state_supports: Vec<u64>,
    pub warnings: Vec<String>,
}

/// Infers the cross-model from an aligned stream pair: how far the next
/// symbol of `target` is pinned down by the history of `source`. States are
/// discovered by recursive extension over the source alphabet, matching
/// cross-derivative estimates within `epsilon` in sup norm; each state's
/// output row is the cross-derivative measured at its identifier string.
pub fn infer_xpfsa(
    source: &SymbolStream,
    target: &SymbolStream,
    cfg: &InferenceConfig,
) -> Result<CrossInferenceResult> {
    cfg.check()?;
    if source.len() != target.len() {
        return Err(Error::LengthMismatch { left: source.len(), right: target.len() });
    }
    if source.len() < cfg.min_length {
        return Err(Error::InsufficientData { needed: cfg.min_length, got: source.len() });
    }

    let depth = cfg.heap_depth(source.alphabet().len());
    let heap = build_cross_heap(source, target, depth, cfg.n_min)?;
    let x0 = heap.hull_vertex()?.string.clone();

    let k_in = source.alphabet().len();
    let k_out = target.alphabet().len();
    let (src, tgt) = (source.symbols(), target.symbols());
    let n_min = cfg.n_min;
    let derive = |x: &[u8]| -> Option<(Vec<f64>, u64)> {
        let (counts, support) = successor_counts(src, tgt, k_out, x);
        if support < n_min {
            return None;
        }
        Some((counts.iter().map(|&c| c as f64 / support as f64).collect(), support))
    };

    let structure = extend_structure(derive, &x0, k_in, cfg)?;
    let component = extract_strong_component(&structure);

    let machine = Xpfsa::new(
        source.alphabet().clone(),
        target.alphabet().clone(),
        component.delta.clone(),
        component.states.iter().map(|st| st.h.clone()).collect(),
    )?;
    debug_assert!(machine.is_valid(), "cross inference produced an invalid machine");

    Ok(CrossInferenceResult {
        machine,
        sync_string: SymbolStream::new(source.alphabet().clone(), x0)?,
        state_supports: component.states.iter().map(|st| st.support).collect(),
        warnings: component.warnings,
    })
}
