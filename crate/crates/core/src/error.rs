use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("width must be at least 1")]
    ZeroWidth,
    #[error("need at least 3 inputs, got {0}")]
    TooFewInputs(usize),
    #[error("modulus {m} outside 3..=2^(N-2) for N = {n}")]
    ModulusRange { n: u32, m: u64 },
    #[error("data width N = {0} unsupported (need 4..=62)")]
    DataWidth(u32),
    #[error("base {a} must be below the modulus {m}")]
    BaseTooLarge { a: u64, m: u64 },
    #[error("{0}")]
    Invalid(String),
}
