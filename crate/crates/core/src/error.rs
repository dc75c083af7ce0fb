use thiserror::Error;

/// Errors raised by the combinatorial and algebraic routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("size mismatch: S_{left} vs S_{right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("{0} is not covexillary (contains 3412)")]
    NotCovexillary(String),

    #[error("e_{v} is not in X_{w} (v is not below w in Bruhat order)")]
    NotBruhatLeq { v: String, w: String },

    #[error("box ({i},{j}) is not an essential box of {w}")]
    NotEssential { i: usize, j: usize, w: String },

    #[error("essential box ({i},{j}) of {w} has rank 0")]
    ZeroRank { i: usize, j: usize, w: String },

    #[error("flag length {flag} does not match partition length {parts}")]
    LengthMismatch { parts: usize, flag: usize },

    #[error("partition {0} does not fit the requested rectangle")]
    PartitionTooLarge(String),

    #[error("partition is not contained in the region")]
    NotContained,

    #[error("variable z[{i}][{j}] is outside the order's universe")]
    ForeignVariable { i: usize, j: usize },

    #[error("monomial ideal is not squarefree")]
    NonSquarefree,

    #[error("simplicial complex is not pure")]
    NonPure,

    #[error("universe of {0} variables exceeds the 64-variable limit")]
    UniverseTooLarge(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("computation budget exceeded")]
    Budget,

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
