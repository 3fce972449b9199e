use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by constructors and operations across the crate.
///
/// Variants split into two families: malformed input (shapes, indices,
/// invalid probability data) and mathematical domain violations (a matrix
/// that should be positive is not, a map that should be unital is not).
/// [`Error::is_domain_error`] tells them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix data has {found} entries, expected {expected}")]
    BadShape { expected: usize, found: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid tensor factor label {label} for an operator with {factors} factors")]
    InvalidFactor { label: usize, factors: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid lifting tensor: {0}")]
    InvalidTensor(String),

    #[error("invalid conditional probability table: {0}")]
    InvalidConditional(String),

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("not a density operator: {0}")]
    NotAState(String),

    #[error("map is not unital (deviation {deviation:e})")]
    NotUnital { deviation: f64 },

    #[error("map is not trace preserving (deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("map is not completely positive (min Choi eigenvalue {min_eigenvalue:e})")]
    NotCp { min_eigenvalue: f64 },

    #[error("map does not preserve Hermiticity (deviation {deviation:e})")]
    NotHermiticityPreserving { deviation: f64 },

    #[error("map image of unit {index} is not positive (min eigenvalue {min_eigenvalue:e})")]
    MapNotPositive { index: usize, min_eigenvalue: f64 },

    #[error("marginal is not faithful (min eigenvalue {min_eigenvalue:e})")]
    NotFaithful { min_eigenvalue: f64 },

    #[error("compound state is not compatible with the given marginal (deviation {deviation:e})")]
    NotCompatible { deviation: f64 },

    #[error("circulant block {block} is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    BlockNotPsd { block: usize, min_eigenvalue: f64 },

    #[error("block traces sum to {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("vector {index} is not normalized (squared norm {norm_sqr})")]
    NotNormalized { index: usize, norm_sqr: f64 },
}

impl Error {
    /// True for violations of a mathematical precondition (exit code 3 in
    /// the CLI), false for malformed or inconsistent input (exit code 2).
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian { .. }
                | Error::NotPsd { .. }
                | Error::NotAState(_)
                | Error::NotUnital { .. }
                | Error::NotTracePreserving { .. }
                | Error::NotCp { .. }
                | Error::NotHermiticityPreserving { .. }
                | Error::MapNotPositive { .. }
                | Error::NotFaithful { .. }
                | Error::NotCompatible { .. }
                | Error::BlockNotPsd { .. }
                | Error::TraceNotOne { .. }
                | Error::NotNormalized { .. }
        )
    }
}
