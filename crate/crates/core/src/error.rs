use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: argument {0} lies on a non-positive integer")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-finite intermediate value in {0}")]
    NonFinite(&'static str),
    #[error("truncation: {needed} coefficients required, {available} available")]
    Truncation { needed: usize, available: usize },
    #[error("L-value too small to take a logarithmic derivative (|L| = {0})")]
    ZeroValue(String),
    #[error("unsupported family for numerical evaluation: {0}")]
    UnsupportedFamily(String),
    #[error("theorem hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("outside the range covered by the non-vanishing argument: {0}")]
    OutOfProvenRange(String),
    #[error("set does not have property A: {0}")]
    PropertyA(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
