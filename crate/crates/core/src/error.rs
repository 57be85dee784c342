use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two series with different base points or truncation orders were combined.
    #[error("series mismatch: base point {left_base} order {left_order} vs base point {right_base} order {right_order}")]
    Mismatch {
        left_base: f64,
        left_order: usize,
        right_base: f64,
        right_order: usize,
    },
    #[error("series must have at least one coefficient")]
    Empty,
    #[error("non-finite value at degree {degree}")]
    NonFinite { degree: usize },
    #[error("numeric range exceeded: {0}")]
    NumericRange(String),
    #[error("series vanishes at the base point {base_point}; cannot invert")]
    SingularAtBasePoint { base_point: f64 },
    #[error("iteration did not stabilize within {max_iters} iterations")]
    IterationLimit { max_iters: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
