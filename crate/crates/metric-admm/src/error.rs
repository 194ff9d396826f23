//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("data does not symmetrize to itself (max deviation {deviation:.3e})")]
    NotSymmetric { deviation: f64 },

    #[error("invalid block partition: split {k} for dimension {n} (need 1 <= k <= n-1)")]
    InvalidPartition { k: usize, n: usize },

    #[error("invalid metric parameter: {0}")]
    InvalidMetric(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("quartic has degenerate degree (leading coefficient vanishes)")]
    DegenerateDegree,

    #[error("closed-form quartic breakdown (u4 = 0); use the bisection fallback")]
    FormulaBreakdown,

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("ill-posed problem: {0}")]
    IllPosed(String),

    #[error("solver produced a non-finite iterate at iteration {iteration}")]
    SolverBlowup { iteration: u64 },

    #[error("oracle run failed to converge within {max_iter} iterations")]
    OracleFailure { max_iter: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
