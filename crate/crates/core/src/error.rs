use thiserror::Error;

/// Errors raised by pmf construction and the bound checks built on top of it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("weights are empty or sum to zero")]
    ZeroMass,

    #[error("negative weight {value} at position {index}")]
    NegativeWeight { index: usize, value: f64 },

    #[error("non-finite weight at position {index}")]
    NonFinite { index: usize },

    #[error("span must be positive and finite, got {0}")]
    InvalidSpan(f64),

    #[error("lattice spans differ: {0} vs {1}")]
    SpanMismatch(f64, f64),

    #[error("offsets {0} and {1} are not on a common grid")]
    IncommensurableOffsets(f64, f64),

    #[error("transform round-off produced a negative entry of magnitude {0:e}")]
    RoundOff(f64),

    #[error("self-convolution power must be at least 1")]
    ZeroPower,

    #[error("distribution is degenerate (single support point)")]
    Degenerate,

    #[error("stored span is not maximal: support gaps share factor {0}")]
    SpanNotMaximal(u64),

    #[error("quantised gaussian range captures only {captured} of the mass")]
    RangeTooSmall { captured: f64 },

    #[error("Bernoulli part decomposition failed: {0}")]
    Decomposition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not converge on [{lo}, {hi}]")]
    Quadrature { lo: f64, hi: f64 },

    #[error("support size {size} exceeds cap {cap}")]
    SupportCap { size: usize, cap: usize },

    #[error("malformed distribution spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
