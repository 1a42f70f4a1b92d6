use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("not a permutation of 1..={n}: {reason}")]
    NotAPermutation { n: usize, reason: String },
    #[error("n = {n} exceeds the supported bound {max} for {what}")]
    TooLarge {
        n: usize,
        max: usize,
        what: &'static str,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("sat oracle: {0}")]
    Oracle(#[from] crate::oracle::OracleError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
