use thiserror::Error;

/// Errors raised by state construction and the entanglement routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero vector: norm {0:e} is below the normalization threshold")]
    ZeroVector(f64),

    #[error("invalid ensemble weights: {0}")]
    BadWeights(String),

    #[error("invalid qubit subset: {0}")]
    BadSubset(String),

    #[error("rank too high: third eigenvalue {0:e} exceeds the rank threshold")]
    RankTooHigh(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("not Hermitian: max |M - M^dagger| = {0:e}")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("not positive semidefinite: min eigenvalue {0:e}")]
    NotPsd(f64),

    #[error("kets are not orthonormal: {0}")]
    NotOrthonormal(String),

    #[error("{name} = {value} is outside its domain [{lo}, {hi}]")]
    Domain {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("point lies outside the Bloch ball: {0}")]
    OutOfBall(String),

    #[error("tangle polynomial vanishes identically: every state in the span has zero 3-tangle")]
    DegenerateAllZero,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("eigenvalue computation did not converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
