use thiserror::Error;

/// All failure modes surfaced by the kernel and the decision layers.
///
/// Precondition violations get their own variants so callers (and the CLI
/// exit-code mapping) can tell user errors from internal inconsistencies.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid orbit set: {0}")]
    InvalidOrbitSet(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operation requires n >= 3, got n = {n}")]
    TooSmall { n: usize },

    #[error("n = 2 is not handled by the gcd criterion; it needs the dedicated rank-2 procedure")]
    RankTwoUnsupported,

    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: String },

    #[error("columns do not extend to a basis: determinantal divisor d_{index} = {value}, expected 1")]
    NotExtendable { index: usize, value: String },

    #[error("expected a matrix of type {expected}, found {found}")]
    WrongType { expected: String, found: String },

    #[error("entry gcd must be 1, found {gcd}")]
    GcdNotOne { gcd: String },

    #[error("zero input where a positive integer is required")]
    ZeroInput,

    #[error("nonzero vector required")]
    ZeroVector,

    #[error("factorization input exceeds the {cap_bits}-bit size cap")]
    FactorCapExceeded { cap_bits: u64 },

    #[error("no coefficient with |k| <= {bound} satisfies the gcd identity")]
    EnumerationExhausted { bound: i64 },

    #[error("matrix satisfies none of the witness selection conditions (I/II/III)")]
    OutsideWitnessCases,

    #[error("internal verification failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
