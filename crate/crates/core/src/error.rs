use thiserror::Error;

/// Everything that can go wrong inside the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse real `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("sqrt({0}) is rational; write it as a rational instead")]
    PerfectSquare(String),

    #[error("liouville base must be at least 2, got {0}")]
    LiouvilleBase(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precision cap of {cap_bits} bits exhausted while {context}")]
    PrecisionCap {
        cap_bits: u32,
        context: String,
        witnesses: Option<(Vec<i64>, Vec<i64>)>,
    },

    #[error("enumeration budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("empty window [{0}, {1}]")]
    EmptyWindow(u64, u64),

    #[error("chain exhausted: the best-approximation sequence is finite (zero residual reached)")]
    ChainExhausted,

    #[error("X = {x} is below the first bracket")]
    BelowFirstBracket { x: u64 },

    #[error("chain too short: records end before bracketing X = {x}")]
    ChainTooShort { x: u64 },

    #[error("no integer point found: {0}")]
    NoPointFound(String),
}

/// Coarse classification used by the command line for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Mathematical,
    Resource,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. }
            | Error::PerfectSquare(_)
            | Error::LiouvilleBase(_)
            | Error::InvalidInput(_)
            | Error::EmptyWindow(..) => ErrorClass::Usage,
            Error::PrecisionCap { .. } | Error::BudgetExceeded { .. } => ErrorClass::Resource,
            Error::ChainExhausted
            | Error::BelowFirstBracket { .. }
            | Error::ChainTooShort { .. }
            | Error::NoPointFound(_) => ErrorClass::Mathematical,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::PerfectSquare(_) => "perfect_square",
            Error::LiouvilleBase(_) => "liouville_base",
            Error::InvalidInput(_) => "invalid_input",
            Error::PrecisionCap { .. } => "precision_cap",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::EmptyWindow(..) => "empty_window",
            Error::ChainExhausted => "chain_exhausted",
            Error::BelowFirstBracket { .. } => "below_first_bracket",
            Error::ChainTooShort { .. } => "chain_too_short",
            Error::NoPointFound(_) => "no_point_found",
        }
    }

    pub(crate) fn cap(cap_bits: u32, context: impl Into<String>) -> Self {
        Error::PrecisionCap {
            cap_bits,
            context: context.into(),
            witnesses: None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
