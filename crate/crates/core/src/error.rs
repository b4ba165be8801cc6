use thiserror::Error;

/// Errors reported by the verification library.
///
/// Invariant breaches (a falsified property) are reported through certificates,
/// not through this type; these variants cover bad inputs and resource limits.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("invalid affine permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("coset stabilizer is infinite (all generators fix the face)")]
    InfiniteStabilizer,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("empty truncation")]
    EmptyTruncation,
    #[error("coefficient mode mismatch")]
    ModeMismatch,
    #[error("group mismatch")]
    GroupMismatch,
    #[error("chamber not in enclos")]
    NotInEnclos,
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("not visible at depth {depth}: {what}")]
    NotVisible { depth: u32, what: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("cache i/o: {0}")]
    Io(String),
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
}

pub type Result<T> = std::result::Result<T, Error>;
