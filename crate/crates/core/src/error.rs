use thiserror::Error;

/// Errors produced by model construction, estimation, and inference.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("stream length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid machine: {0}")]
    InvalidMachine(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("history has zero probability under the model")]
    ZeroProbabilityHistory,

    #[error("string `{0}` has no counted occurrence with a successor")]
    NoOccurrence(String),

    #[error("insufficient data: need at least {needed} symbols, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("state count exceeded the cap of {0} during structure extension")]
    ModelExplosion(usize),

    #[error("degenerate process: next-symbol distribution has zero entropy")]
    DegenerateProcess,

    #[error("degenerate quantization: {0}")]
    DegenerateQuantization(String),

    #[error("stationary distribution did not converge within {0} iterations")]
    NonConvergence(usize),

    #[error("malformed file: {0}")]
    MalformedFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
