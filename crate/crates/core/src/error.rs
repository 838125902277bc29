use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{algorithm} did not converge after {iterations} iterations")]
    NonConvergence {
        algorithm: &'static str,
        iterations: usize,
    },

    #[error("matrix is singular (zero pivot at index {index})")]
    Singular { index: usize },

    #[error("matrix is not lower triangular")]
    NotTriangular,

    #[error("grid value overflows f64 at index {index}")]
    Overflow { index: usize },

    #[error("degenerate random draw: {0}")]
    DegenerateDraw(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("vectors are not orthogonal (inner product {inner})")]
    NotOrthogonal { inner: f64 },

    #[error("path has no point at time {time}")]
    MissingGridPoint { time: f64 },

    #[error("{needed} constraints exceed the capacity {capacity} of the coordinate cell")]
    CapacityExceeded { needed: usize, capacity: usize },

    #[error("bound is vacuous: {0}")]
    InvalidRegime(String),

    #[error("threshold search unresolved: {0}")]
    Unresolved(String),
}
