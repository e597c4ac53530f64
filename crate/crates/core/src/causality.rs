use rayon::prelude::*;

use crate::algebra::{projective_composition_detailed, stream_run};
use crate::alphabet::SymbolStream;
use crate::cross::{infer_xpfsa, CrossInferenceResult};
use crate::dist::{entropy, Distribution};
use crate::error::{Error, Result};
use crate::inference::{infer_pfsa, InferenceConfig};
use crate::pfsa::Pfsa;
use crate::xpfsa::Xpfsa;

/// Slack beyond [0, 1] that is attributed to rounding rather than a defect.
const GAMMA_SLACK: f64 = 1e-6;

/// A coefficient of causal dependence, with the raw pre-clamp value kept for
/// diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct Gamma {
    pub value: f64,
    pub raw: f64,
}

/// Coefficient of causal dependence from a cross-model: one minus the ratio
/// of the occupancy-weighted entropy of the output rows to the entropy of
/// the unconditioned next-symbol distribution. Clamped to [0, 1]; excursions
/// beyond `GAMMA_SLACK` are logged.
pub fn gamma_analytic(
    base: &Distribution,
    machine: &Xpfsa,
    occupancy: &Distribution,
) -> Result<Gamma> {
    if base.len() != machine.output_alphabet().len() {
        return Err(Error::InvalidInput(format!(
            "base distribution arity {} differs from output alphabet size {}",
            base.len(),
            machine.output_alphabet().len()
        )));
    }
    if occupancy.len() != machine.n_states() {
        return Err(Error::InvalidInput(format!(
            "occupancy of length {} for {} states",
            occupancy.len(),
            machine.n_states()
        )));
    }
    let denominator = entropy(base);
    if denominator <= 0.0 {
        return Err(Error::DegenerateProcess);
    }
    let conditional: f64 = (0..machine.n_states())
        .map(|q| occupancy.get(q) * crate::dist::entropy_of(machine.out_row(q)))
        .sum();
    let raw = 1.0 - conditional / denominator;
    if !(-GAMMA_SLACK..=1.0 + GAMMA_SLACK).contains(&raw) {
        log::warn!("gamma {raw} clamped to [0, 1] beyond the rounding allowance");
    }
    Ok(Gamma { value: raw.clamp(0.0, 1.0), raw })
}

/// Everything produced while measuring dependence of `target`'s next symbol
/// on `source`'s history.
#[derive(Debug, Clone)]
pub struct GammaReport {
    pub gamma: f64,
    pub raw_gamma: f64,
    pub cross: CrossInferenceResult,
    /// Where `source` leaves the cross-model's states during replay.
    pub occupancy: Distribution,
    /// Model-implied unconditioned next-symbol distribution of `target`.
    pub base: Distribution,
    /// Raw symbol frequencies of `target`, for reference.
    pub target_frequencies: Vec<f64>,
}

/// Estimates the dependence of `target` on `source` from the aligned pair:
/// infers the cross-model, replays `source` through its graph for the state
/// occupancy, and evaluates the entropy ratio against the occupancy-implied
/// base distribution (which agrees with the raw target frequencies in the
/// limit and keeps the raw coefficient inside [0, 1] at finite sample).
pub fn gamma_empirical(
    source: &SymbolStream,
    target: &SymbolStream,
    cfg: &InferenceConfig,
) -> Result<GammaReport> {
    let frequencies = target.symbol_frequencies();
    if frequencies.iter().filter(|&&f| f > 0.0).count() < 2 {
        return Err(Error::DegenerateProcess);
    }
    let cross = infer_xpfsa(source, target, cfg)?;
    let occupancy = stream_run(&cross.machine.graph(), source)?;
    let mut base = vec![0.0; target.alphabet().len()];
    for q in 0..cross.machine.n_states() {
        let w = occupancy.get(q);
        for (sigma, &p) in cross.machine.out_row(q).iter().enumerate() {
            base[sigma] += w * p;
        }
    }
    let base = Distribution::new(base)?;
    let gamma = gamma_analytic(&base, &cross.machine, &occupancy)?;
    Ok(GammaReport {
        gamma: gamma.value,
        raw_gamma: gamma.raw,
        cross,
        occupancy,
        base,
        target_frequencies: frequencies,
    })
}

/// A directed arc of the causality network: dependence of `to` on `from`.
#[derive(Debug, Clone)]
pub struct NetworkArc {
    pub from: String,
    pub to: String,
    pub gamma: f64,
    pub n_states: usize,
    pub machine: Option<Xpfsa>,
}

/// An ordered pair whose coefficient could not be computed.
#[derive(Debug, Clone)]
pub struct SkippedPair {
    pub from: String,
    pub to: String,
    pub reason: String,
}

/// Directed weighted graph of pairwise causal dependence over named streams.
#[derive(Debug, Clone, Default)]
pub struct CausalityNetwork {
    pub nodes: Vec<String>,
    pub self_models: Vec<Option<Pfsa>>,
    pub arcs: Vec<NetworkArc>,
    pub skipped: Vec<SkippedPair>,
}

/// Computes the full network: a self-model per stream and one directed arc
/// per ordered pair. Per-pair failures become skipped entries, never a
/// global failure. Pairs are evaluated in parallel; the result is identical
/// to sequential evaluation.
pub fn causality_network(
    streams: &[(String, SymbolStream)],
    cfg: &InferenceConfig,
) -> Result<CausalityNetwork> {
    if streams.len() < 2 {
        return Err(Error::InvalidInput("a network needs at least two streams".into()));
    }
    let len0 = streams[0].1.len();
    for (name, s) in streams {
        if s.len() != len0 {
            return Err(Error::LengthMismatch { left: len0, right: s.len() });
        }
        if streams.iter().filter(|(n, _)| n == name).count() > 1 {
            return Err(Error::InvalidInput(format!("duplicate stream name `{name}`")));
        }
    }

    let self_models: Vec<Option<Pfsa>> = streams
        .par_iter()
        .map(|(name, s)| match infer_pfsa(s, cfg) {
            Ok(m) => Some(m),
            Err(e) => {
                log::warn!("self-model for `{name}` failed: {e}");
                None
            }
        })
        .collect();

    let pairs: Vec<(usize, usize)> = (0..streams.len())
        .flat_map(|i| (0..streams.len()).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let results: Vec<(usize, usize, Result<GammaReport>)> = pairs
        .par_iter()
        .map(|&(i, j)| (i, j, gamma_empirical(&streams[i].1, &streams[j].1, cfg)))
        .collect();

    let mut network = CausalityNetwork {
        nodes: streams.iter().map(|(n, _)| n.clone()).collect(),
        self_models,
        ..Default::default()
    };
    for (i, j, result) in results {
        let (from, to) = (streams[i].0.clone(), streams[j].0.clone());
        match result {
            Ok(report) => network.arcs.push(NetworkArc {
                from,
                to,
                gamma: report.gamma,
                n_states: report.cross.machine.n_states(),
                machine: Some(report.cross.machine),
            }),
            Err(e) => network.skipped.push(SkippedPair { from, to, reason: e.to_string() }),
        }
    }
    Ok(network)
}

/// Expected next-symbol distribution of the cross-model's target process
/// given the recent `history` of its source process.
///
/// The source's self-model is projected onto the cross-model's graph, the
/// stationary state distribution is conditioned on the history, and the
/// result is pushed through the output rows.
pub fn predict_next(
    self_model: &Pfsa,
    cross_model: &Xpfsa,
    history: &SymbolStream,
) -> Result<Distribution> {
    if self_model.alphabet() != cross_model.input_alphabet() {
        return Err(Error::AlphabetMismatch(
            "self-model alphabet differs from cross-model input alphabet".into(),
        ));
    }
    if history.alphabet() != cross_model.input_alphabet() {
        return Err(Error::AlphabetMismatch(
            "history alphabet differs from cross-model input alphabet".into(),
        ));
    }
    let (projected, kept) = projective_composition_detailed(self_model, &cross_model.graph())?;
    let stationary = projected.stationary_distribution()?;
    let conditioned = projected.propagate_distribution(&stationary, history)?;

    let k = cross_model.output_alphabet().len();
    let mut tau = vec![0.0; k];
    for (q, &cross_state) in kept.iter().enumerate() {
        let w = conditioned.get(q);
        for (sigma, &p) in cross_model.out_row(cross_state).iter().enumerate() {
            tau[sigma] += w * p;
        }
    }
    Distribution::new(tau)
}

/// Fuses per-source predictions by averaging them under normalized gamma
/// weights. With no informative source (all gammas zero) the fallback
/// distribution is returned when supplied, else uniform.
pub fn fuse_predictions(
    taus: &[Distribution],
    gammas: &[f64],
    fallback: Option<&Distribution>,
) -> Result<Distribution> {
    if taus.len() != gammas.len() {
        return Err(Error::LengthMismatch { left: taus.len(), right: gammas.len() });
    }
    if taus.is_empty() {
        return Err(Error::InvalidInput("nothing to fuse".into()));
    }
    let arity = taus[0].len();
    if taus.iter().any(|t| t.len() != arity) {
        return Err(Error::InvalidInput("predictions have mixed arities".into()));
    }
    if gammas.iter().any(|g| *g < 0.0 || !g.is_finite()) {
        return Err(Error::InvalidInput("weights must be non-negative".into()));
    }
    let total: f64 = gammas.iter().sum();
    if total <= 0.0 {
        return Ok(match fallback {
            Some(d) => d.clone(),
            None => Distribution::uniform(arity),
        });
    }
    let mut fused = vec![0.0; arity];
    for (tau, &g) in taus.iter().zip(gammas) {
        for (i, &p) in tau.weights().iter().enumerate() {
            fused[i] += (g / total) * p;
        }
    }
    Distribution::new(fused)
}
