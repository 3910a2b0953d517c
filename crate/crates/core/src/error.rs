use thiserror::Error;

/// Errors raised by the numeric, geometric and interpreter layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value is undefined: {0}")]
    Undefined(String),
    #[error("precision exhausted after {depth} refinement levels: {context}")]
    PrecisionExhausted { depth: u32, context: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point lies outside the domain of {0}")]
    OutsideDomain(String),
    #[error("partition class not supported for exact boundary distance: {0}")]
    UnsupportedPartitionClass(String),
    #[error("symbol {symbol:?} is not in the alphabet")]
    SymbolOutsideAlphabet { symbol: char },
    #[error("symbol {symbol:?} cannot be encoded by the {scheme} scheme")]
    SymbolOutsideScheme { symbol: char, scheme: &'static str },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid construction: {0}")]
    InvalidConstruction(String),
    #[error("unknown reference: {0}")]
    UnknownReference(String),
    #[error("program is not runnable here: {0}")]
    NotRunnable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn exhausted(depth: u32, context: impl Into<String>) -> Self {
        Error::PrecisionExhausted {
            depth,
            context: context.into(),
        }
    }
}
