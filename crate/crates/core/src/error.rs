use thiserror::Error;

/// Errors raised across the symbolic and numerical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero: {0}")]
    DivisionByZero(String),

    /// A zero test could not be decided at the configured precision.
    #[error("undecidable coefficient `{expr}` (precision reached: {bits} bits)")]
    Undecidable { expr: String, bits: u32 },

    #[error("undecidable frequency: cannot decide whether `{0}` and `{1}` coincide")]
    UndecidableFrequency(String, String),

    #[error("unsupported exponent `{0}`: exponents must be free of nontrivial denominators")]
    UnsupportedExponent(String),

    #[error("exp nesting depth {depth} exceeds the limit {limit}")]
    ExpDepthExceeded { depth: usize, limit: usize },

    #[error("precision {0} bits is outside the supported range")]
    PrecisionOutOfRange(u32),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("evaluation at a pole of `{0}`")]
    Pole(String),

    #[error("solution hits the denominator identically")]
    DenominatorVanishes,

    #[error("quadrature did not converge (last two estimates {last} and {prev})")]
    NoConvergence { last: f64, prev: f64 },

    #[error("zero counting failed: {0}")]
    ZeroCount(String),

    #[error("zero search exhausted its budget of {0} cells")]
    Budget(usize),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("unresolved name `{name}` at {line}:{col}")]
    Unresolved {
        name: String,
        line: usize,
        col: usize,
    },

    #[error("missing definition `{0}`")]
    Missing(String),
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    /// True for errors that stem from an undecided zero test.
    pub fn is_undecidable(&self) -> bool {
        matches!(
            self,
            Error::Undecidable { .. } | Error::UndecidableFrequency(..)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
