use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left_rows}x{left_cols} against {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("size guard: n = {n} exceeds the limit n <= {limit}; {hint}")]
    SizeGuard {
        n: usize,
        limit: usize,
        hint: &'static str,
    },

    #[error("n must be at least 1")]
    ZeroSize,

    #[error("rank {rank} is out of range for n = {n} (valid ranks are 0..{count})")]
    RankOutOfRange { n: usize, rank: u64, count: u64 },

    #[error("transversal size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid transversal: {0}")]
    InvalidTransversal(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("basis-pair construction requires n >= 2")]
    DegenerateBasisPair,

    #[error("matrix parse error: {0}")]
    MatrixParse(String),

    #[error("instance error: {0}")]
    Instance(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
