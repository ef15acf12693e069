use thiserror::Error;

/// Errors reported by the algebra, twist-table, Fibonacci and residue modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("signature mismatch: operands live in different algebras")]
    SignatureMismatch,

    #[error("element is not invertible (norm is zero)")]
    NotInvertible,

    #[error("basis index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: u64, dimension: u64 },

    #[error("table depth {depth} exceeds the configured maximum {max}")]
    ResourceLimit { depth: usize, max: usize },

    #[error("block ({row}, {col}) does not match any of A, B, C, -B, -C: {entries:?}")]
    TheoremViolation {
        row: usize,
        col: usize,
        entries: [[i8; 2]; 2],
    },

    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("sign criterion inapplicable: E(alpha1, alpha2) = 0")]
    CriterionInapplicable,

    #[error("degenerate generator: {0}")]
    DegenerateGenerator(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("degenerate prime: {0}")]
    DegeneratePrime(String),

    #[error("symbol {symbol} out of range for Z_{modulus}")]
    SymbolOutOfRange { symbol: i64, modulus: i64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
