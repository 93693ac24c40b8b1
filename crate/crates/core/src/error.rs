use thiserror::Error;

use crate::liealg::Family;

/// Errors raised by the affine-fusion library.
#[derive(Debug, Error)]
pub enum FusionError {
    #[error("invalid rank {rank} for family {family}")]
    InvalidRank { family: Family, rank: usize },

    #[error("invalid level {0}: level must be at least 1")]
    InvalidLevel(i64),

    #[error("dimension mismatch: expected {expected} labels, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("weight [{weight}] is not in P+ at level {level}")]
    NotInPplus { weight: String, level: i64 },

    #[error("folding did not terminate within {0} reflections")]
    NonTermination(usize),

    #[error("no rational charge fits simple current [{current}] at weight [{weight}]")]
    InconsistentCharge { current: String, weight: String },

    #[error("S-matrix failed {check}: residual {residual:e}")]
    Unitarity { check: &'static str, residual: f64 },

    #[error("negative fusion coefficient {value} in [{lambda}] x [{mu}] -> [{nu}]")]
    NegativeFusion {
        lambda: String,
        mu: String,
        nu: String,
        value: i64,
    },

    #[error("Verlinde rounding failure: residual {0:e} exceeds tolerance")]
    Rounding(f64),

    #[error("ell = {ell} is not coprime to {modulus}")]
    NotCoprime { ell: i64, modulus: i64 },

    #[error("Galois fold of [{0}] landed on an alcove wall")]
    GaloisWall(String),

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("no S-matrix column matches the image of column {0}")]
    NoPartner(usize),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("search bound exceeded: |P+| = {size} > {bound}")]
    SearchBound { size: usize, bound: usize },

    #[error("wrong family: {0}")]
    WrongFamily(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, FusionError>;
