//! Generative models of directional dependence between quantized data
//! streams.
//!
//! A single stream over a finite alphabet is modeled by a probabilistic
//! finite-state automaton ([`Pfsa`]) inferred from empirical next-symbol
//! statistics. A pair of aligned streams is modeled by a crossed automaton
//! ([`Xpfsa`]) whose states summarize how much the history of one stream
//! pins down the next symbol of the other. The entropy reduction achieved by
//! that conditioning is the coefficient of causal dependence `gamma` in
//! [0, 1]; computing it for every ordered pair of a stream collection yields
//! a directed, weighted causality network.
//!
//! The crate also provides the machine algebra connecting these objects
//! (synchronous and projective composition, projected distributions, stream
//! replay), next-symbol prediction through cross-models with gamma-weighted
//! fusion, and the quantizers and serialization formats used by the CLI.

pub mod algebra;
pub mod alphabet;
pub mod causality;
pub mod counting;
pub mod coupled;
pub mod cross;
pub mod dist;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod heap;
pub mod inference;
pub mod json;
pub mod pfsa;
pub mod quantize;
pub mod series;
pub mod xpfsa;

pub use alphabet::{Alphabet, SymbolStream};
pub use causality::{
    causality_network, fuse_predictions, gamma_analytic, gamma_empirical, predict_next,
    CausalityNetwork, Gamma, GammaReport, NetworkArc, SkippedPair,
};
pub use coupled::{simulate_coupled, CoupledSystemSpec};
pub use cross::{infer_xpfsa, CrossInferenceResult};
pub use dist::{entropy, Distribution};
pub use error::{Error, Result};
pub use graph::LabeledGraph;
pub use heap::{build_cross_heap, build_heap, DerivativeHeap, HeapEntry};
pub use inference::{infer_pfsa, InferenceConfig};
pub use pfsa::{pfsa_distance, Pfsa, PfsaViolation};
pub use series::SeriesTable;
pub use xpfsa::Xpfsa;
