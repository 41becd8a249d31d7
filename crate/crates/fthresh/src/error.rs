use thiserror::Error;

/// Errors produced by the library.
///
/// The broad classes matter for the CLI exit-code contract: input/syntax
/// problems, violated mathematical preconditions, and exhausted resource
/// budgets are reported separately.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("characteristic mismatch: {0} vs {1}")]
    CharMismatch(u64, u64),

    #[error("variable-count mismatch: {0} vs {1}")]
    NvarsMismatch(usize, usize),

    #[error("monomial exponent exceeds the configured cap of {cap}")]
    ExponentCap { cap: u32 },

    #[error("{0} is not a power of the characteristic {1}")]
    NotPowerOfChar(u64, u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("pair is not verifiably sharply F-pure within the level budget")]
    PairNotFPure,

    #[error("resource budget exceeded: {what}")]
    BudgetExceeded { what: String },

    #[error("chain did not stabilize within the level budget")]
    Unstable,

    #[error("search unresolved at the configured denominator bound")]
    Unresolved,

    #[error("insufficient certified values: need {need}, have {have}")]
    InsufficientData { need: usize, have: usize },

    #[error("invalid job: {0}")]
    Job(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code class for the CLI: 2 = schema/syntax, 3 = mathematical
    /// precondition, 4 = resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. } | Error::UnknownVariable { .. } | Error::Job(_) => 2,
            Error::NotPrime(_)
            | Error::CharMismatch(..)
            | Error::NvarsMismatch(..)
            | Error::NotPowerOfChar(..)
            | Error::Precondition(_)
            | Error::PairNotFPure
            | Error::InsufficientData { .. } => 3,
            Error::ExponentCap { .. }
            | Error::BudgetExceeded { .. }
            | Error::Unstable
            | Error::Unresolved => 4,
        }
    }
}
