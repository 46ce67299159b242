use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("precision underflow: {0}")]
    PrecisionUnderflow(String),
    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),
    #[error("window exceeded: needs length {needed}, window is {window}")]
    WindowExceeded { needed: u32, window: u32 },
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<u8>),
    #[error("element is not a minimal coset representative")]
    NotMinimal,
    #[error("unsupported for this formal group law: {0}")]
    UnsupportedTheory(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("denominator remains in {what}: {detail}")]
    DenominatorRemains { what: String, detail: String },
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error("invalid root datum: {0}")]
    InvalidRootDatum(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
